// Command-line front end for the spin-1/2 D=2 matrix product state toolkit:
// build/classify/witness/spectrum/scan/hamiltonian/verify/correlate/
// equivalence workflows with deterministic JSON/CSV output.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mps2/mps2.hpp"

namespace {

using namespace mps2;

struct ModelOptions {
  std::string model;
  std::string pair_file;
  double g = 0.0, theta = 0.0, c = 0.0, u = 0.0, q = 0.0;
  int epsilon = 1;
};

void add_model_options(CLI::App* cmd, ModelOptions& opt, const std::string& suffix = "") {
  auto* model = cmd->add_option("--model" + suffix, opt.model, "model tag: A, B, C or cirac");
  auto* file = cmd->add_option("--pair-file" + suffix, opt.pair_file,
                               "JSON matrix-pair file (alternative to --model)");
  model->excludes(file);
  cmd->add_option("--g" + suffix, opt.g, "model parameter g");
  cmd->add_option("--theta" + suffix, opt.theta, "model A angle theta");
  cmd->add_option("--c" + suffix, opt.c, "model B parameter c");
  cmd->add_option("--u" + suffix, opt.u, "model C parameter u");
  cmd->add_option("--q" + suffix, opt.q, "Cirac model parameter q");
  cmd->add_option("--epsilon" + suffix, opt.epsilon, "trace sign epsilon (+1 or -1)")
      ->check(CLI::IsMember({1, -1}));
}

MatrixPair resolve_pair(const ModelOptions& opt) {
  if (!opt.pair_file.empty()) return load_pair_file(opt.pair_file);
  if (opt.model.empty())
    throw std::invalid_argument("exactly one of --model or --pair-file is required");
  if (opt.model == "A") return build_model_a(opt.g, opt.theta, opt.epsilon);
  if (opt.model == "B") return build_model_b(opt.g, opt.c, opt.epsilon);
  if (opt.model == "C") return build_model_c(opt.g, opt.u, opt.epsilon);
  if (opt.model == "cirac") return build_cirac(opt.q);
  throw std::invalid_argument("unknown model tag: " + opt.model);
}

std::optional<ModelTag> tag_of(const ModelOptions& opt) {
  if (opt.model == "A") return ModelTag::A;
  if (opt.model == "B") return ModelTag::B;
  if (opt.model == "C") return ModelTag::C;
  return std::nullopt;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

ScanAxis parse_axis(const std::string& spec) {
  // grammar: name:min:max:steps
  std::istringstream in(spec);
  std::string name, smin, smax, ssteps;
  if (!std::getline(in, name, ':') || !std::getline(in, smin, ':') ||
      !std::getline(in, smax, ':') || !std::getline(in, ssteps))
    throw std::invalid_argument("--param expects name:min:max:steps, got '" + spec + "'");
  ScanAxis axis;
  axis.name = name;
  try {
    axis.min = std::stod(smin);
    axis.max = std::stod(smax);
    axis.steps = std::stoi(ssteps);
  } catch (const std::exception&) {
    throw std::invalid_argument("--param expects numeric min:max:steps in '" + spec + "'");
  }
  return axis;
}

std::vector<int> parse_int_list(const std::string& spec, const char* what) {
  std::vector<int> out;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": expected integer list, got '" + spec + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& spec, const char* what) {
  std::vector<double> out;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": expected number list, got '" + spec + "'");
    }
  }
  return out;
}

SiteOperator parse_site_operator(const std::string& name) {
  if (name == "x" || name == "X") return pauli::x();
  if (name == "y" || name == "Y") return pauli::y();
  if (name == "z" || name == "Z") return pauli::z();
  if (name == "id" || name == "I") return pauli::id();
  throw std::invalid_argument("unknown operator '" + name + "' (expected x, y, z or id)");
}

struct ParentConstruction {
  int k = 0;
  NullSpaceBasis basis;
  SymmetryOrbits orbits;
  LocalHamiltonian local;
};

ParentConstruction build_parent(const MatrixPair& pair, int k_override,
                                const std::vector<double>& weights, double tol) {
  ParentConstruction out;
  if (k_override > 0) {
    out.k = k_override;
  } else {
    auto k = interaction_range(pair, 6, tol);
    if (!k) throw numerical_error("no nontrivial null space up to k_max");
    out.k = *k;
  }
  out.basis = null_space_basis(pair, out.k, tol);
  if (out.basis.vectors.empty())
    throw numerical_error("null space is trivial at k = " + std::to_string(out.k));
  out.orbits = symmetry_orbits(out.basis, find_spin_flip_witness(pair), find_parity_witness(pair));
  std::vector<double> w = weights;
  if (w.empty()) w.assign(out.orbits.groups.size(), 1.0);
  if (w.size() != out.orbits.groups.size())
    throw std::invalid_argument("--weights: expected one weight per orbit group (" +
                                std::to_string(out.orbits.groups.size()) + ")");
  out.local = local_hamiltonian(out.orbits, w);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"spin-1/2 matrix product states with 2x2 auxiliary matrices"};
  app.require_subcommand(1);

  // --- build ---------------------------------------------------------------
  auto* cmd_build = app.add_subcommand("build", "emit canonical model matrices as a pair file");
  ModelOptions build_opt;
  std::string build_out;
  add_model_options(cmd_build, build_opt);
  cmd_build->add_option("--out", build_out, "output path (default stdout)");

  // --- classify ------------------------------------------------------------
  auto* cmd_classify = app.add_subcommand("classify", "canonicalize a pair into model A/B/C");
  ModelOptions classify_opt;
  std::string classify_out;
  double classify_tol = kEigenGapTol;
  add_model_options(cmd_classify, classify_opt);
  cmd_classify->add_option("--out", classify_out, "output path (default stdout)");
  cmd_classify->add_option("--tol", classify_tol, "eigenvalue gap tolerance");

  // --- witness -------------------------------------------------------------
  auto* cmd_witness = app.add_subcommand("witness", "find spin-flip and parity witnesses");
  ModelOptions witness_opt;
  std::string witness_out;
  add_model_options(cmd_witness, witness_opt);
  cmd_witness->add_option("--out", witness_out, "output path (default stdout)");

  // --- spectrum ------------------------------------------------------------
  auto* cmd_spectrum = app.add_subcommand("spectrum", "transfer-matrix eigenvalues and xi");
  ModelOptions spectrum_opt;
  std::string spectrum_out;
  add_model_options(cmd_spectrum, spectrum_opt);
  cmd_spectrum->add_option("--out", spectrum_out, "output path (default stdout)");

  // --- scan ----------------------------------------------------------------
  auto* cmd_scan = app.add_subcommand("scan", "parameter sweep: CSV records + crossing report");
  ModelOptions scan_opt;
  std::vector<std::string> scan_params;
  std::string scan_out, scan_report;
  add_model_options(cmd_scan, scan_opt);
  cmd_scan->add_option("--param", scan_params, "axis spec name:min:max:steps (once or twice)")
      ->required()
      ->expected(1, 2);
  cmd_scan->add_option("--out", scan_out, "CSV output path (default stdout)");
  cmd_scan->add_option("--report", scan_report, "crossing report JSON path (default stdout)");

  // --- hamiltonian ---------------------------------------------------------
  auto* cmd_ham = app.add_subcommand(
      "hamiltonian", "interaction range, null basis, Pauli decomposition, comparison report");
  ModelOptions ham_opt;
  std::string ham_out, ham_weights;
  int ham_k = 0;
  bool ham_dump_local = false;
  double ham_tol = kRankTol;
  add_model_options(cmd_ham, ham_opt);
  cmd_ham->add_option("--k", ham_k, "block size override (default: minimal k)");
  cmd_ham->add_option("--weights", ham_weights, "comma-separated positive weights per orbit");
  cmd_ham->add_flag("--dump-local", ham_dump_local, "include the dense local term");
  cmd_ham->add_option("--tol", ham_tol, "null-space rank tolerance");
  cmd_ham->add_option("--out", ham_out, "output path (default stdout)");

  // --- verify --------------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "ED ground-state check of the parent chain");
  ModelOptions verify_opt;
  std::string verify_out, verify_n = "6,8", verify_export;
  add_model_options(cmd_verify, verify_opt);
  cmd_verify->add_option("--n", verify_n, "comma-separated chain sizes (default 6,8)");
  cmd_verify->add_option("--export-state", verify_export,
                         "write the dense state of the first n as little-endian float64 pairs");
  cmd_verify->add_option("--out", verify_out, "output path (default stdout)");

  // --- correlate -----------------------------------------------------------
  auto* cmd_corr = app.add_subcommand("correlate", "one/two-point function tables versus r");
  ModelOptions corr_opt;
  std::string corr_out, corr_op = "z", corr_format = "json";
  int corr_rmax = 10, corr_n = 0;
  add_model_options(cmd_corr, corr_opt);
  cmd_corr->add_option("--op", corr_op, "site operator: x, y, z or id (default z)");
  cmd_corr->add_option("--r-max", corr_rmax, "largest separation (default 10)");
  cmd_corr->add_option("--n", corr_n, "finite chain size; omit for the thermodynamic limit");
  cmd_corr->add_option("--format", corr_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_corr->add_option("--out", corr_out, "output path (default stdout)");

  // --- equivalence ----------------------------------------------------------
  auto* cmd_eqv = app.add_subcommand("equivalence", "find S, mu with S A_i S^-1 = mu A'_i");
  ModelOptions eqv_opt1, eqv_opt2;
  std::string eqv_out;
  add_model_options(cmd_eqv, eqv_opt1);
  add_model_options(cmd_eqv, eqv_opt2, "2");
  cmd_eqv->add_option("--out", eqv_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (cmd_build->parsed()) {
    MatrixPair pair = resolve_pair(build_opt);
    emit(dump_json(pair_to_json(pair)), build_out);
    return 0;
  }

  if (cmd_classify->parsed()) {
    CanonicalForm form = canonicalize(resolve_pair(classify_opt), classify_tol);
    emit(dump_json(canonical_form_to_json(form)), classify_out);
    return 0;
  }

  if (cmd_witness->parsed()) {
    MatrixPair pair = resolve_pair(witness_opt);
    Json j;
    auto flip = find_spin_flip_witness(pair);
    auto par = find_parity_witness(pair);
    j["spin_flip"] = flip ? spin_flip_to_json(*flip, verify_witness(pair, *flip)) : Json("none");
    j["parity"] = par ? parity_to_json(*par, verify_witness(pair, *par)) : Json("none");
    emit(dump_json(j), witness_out);
    return 0;
  }

  if (cmd_spectrum->parsed()) {
    MatrixPair pair = resolve_pair(spectrum_opt);
    TransferMatrix t = transfer_matrix(pair);
    Json j;
    Json eigs = Json::array();
    for (int i = 0; i < 4; ++i) eigs.push_back(complex_to_json(t.spectrum.eigenvalues(i)));
    j["eigenvalues"] = eigs;
    j["degeneracy_of_max"] = t.degeneracy_of_max;
    double xi = correlation_length(pair);
    j["xi"] = std::isinf(xi) ? Json("inf") : Json(xi);
    auto tag = tag_of(spectrum_opt);
    if (tag && (*tag == ModelTag::B || *tag == ModelTag::C) && spectrum_opt.epsilon == 1) {
      std::map<std::string, double> params{
          {"g", spectrum_opt.g}, {"c", spectrum_opt.c}, {"u", spectrum_opt.u}};
      std::array<Complex, 4> closed = analytic_spectrum(*tag, params);
      Json an = Json::array();
      double dev = 0.0;
      for (int i = 0; i < 4; ++i) {
        an.push_back(complex_to_json(closed[static_cast<size_t>(i)]));
        dev = std::max(dev, std::abs(std::abs(closed[static_cast<size_t>(i)]) -
                                     std::abs(t.spectrum.eigenvalues(i))));
      }
      j["analytic"] = an;
      j["analytic_max_deviation"] = dev;
    }
    emit(dump_json(j), spectrum_out);
    return 0;
  }

  if (cmd_scan->parsed()) {
    auto tag = tag_of(scan_opt);
    if (!tag) throw std::invalid_argument("scan requires --model A, B or C");
    ScanGrid grid;
    for (const std::string& spec : scan_params) grid.axes.push_back(parse_axis(spec));
    grid.fixed = {{"g", scan_opt.g},
                  {"theta", scan_opt.theta},
                  {"c", scan_opt.c},
                  {"u", scan_opt.u},
                  {"epsilon", static_cast<double>(scan_opt.epsilon)}};
    for (const ScanAxis& ax : grid.axes) grid.fixed.erase(ax.name);
    std::vector<SpectralRecord> records = sweep(*tag, grid);
    emit(records_to_csv(records), scan_out);

    // crossing report: 1-D sweeps directly, 2-D as per-row scans both ways
    Json report;
    if (grid.axes.size() == 1) {
      report = crossing_report_to_json(detect_crossings(*tag, grid.axes[0], grid.fixed));
    } else {
      Json rows = Json::array();
      for (int orient = 0; orient < 2; ++orient) {
        const ScanAxis& moving = grid.axes[orient == 0 ? 0 : 1];
        const ScanAxis& fixed_ax = grid.axes[orient == 0 ? 1 : 0];
        for (int i = 0; i < fixed_ax.steps; ++i) {
          std::map<std::string, double> fixed = grid.fixed;
          fixed[fixed_ax.name] = fixed_ax.at(i);
          Json row;
          row["axis"] = moving.name;
          row["fixed"] = {{fixed_ax.name, fixed_ax.at(i)}};
          row["report"] = crossing_report_to_json(detect_crossings(*tag, moving, fixed));
          rows.push_back(row);
        }
      }
      report["row_scans"] = rows;
    }
    emit(dump_json(report), scan_report);
    return 0;
  }

  if (cmd_ham->parsed()) {
    MatrixPair pair = resolve_pair(ham_opt);
    std::vector<double> weights =
        ham_weights.empty() ? std::vector<double>{} : parse_double_list(ham_weights, "--weights");
    ParentConstruction parent = build_parent(pair, ham_k, weights, ham_tol);
    Json j;
    j["interaction_range"] = parent.k;
    j["null_dimension"] = parent.basis.vectors.size();
    Json groups = Json::array();
    for (const OrbitGroup& g : parent.orbits.groups) {
      Json gj;
      gj["size"] = g.vectors.size();
      gj["flip_character"] = g.flip_character;
      gj["reversal_character"] = g.reversal_character;
      groups.push_back(gj);
    }
    j["orbit_groups"] = groups;
    j["pauli"] = pauli_to_json(pauli_decomposition(parent.local));
    // comparison against the printed literature forms where one exists
    auto classes = chain_word_classes(pauli_decomposition(parent.local));
    auto tag = tag_of(ham_opt);
    if (ham_opt.model == "cirac") {
      j["comparison"] = comparison_to_json(
          compare_chain_classes(classes, printed_cirac_chain(ham_opt.q), "cirac printed form"));
    } else if (tag == ModelTag::A) {
      Json comps = Json::array();
      comps.push_back(comparison_to_json(compare_chain_classes(
          classes, printed_model_a_chain(ham_opt.theta, 1.0, 1.0), "model A printed form")));
      comps.push_back(comparison_to_json(compare_chain_classes(
          classes, printed_cirac_chain(0.5 * (1.0 + std::cos(ham_opt.theta))),
          "cirac printed form")));
      j["comparison"] = comps;
    } else if (tag == ModelTag::B) {
      j["comparison"] = comparison_to_json(compare_chain_classes(
          classes, printed_model_b_chain(ham_opt.g), "model B printed form"));
    }
    if (ham_dump_local) j["local"] = local_hamiltonian_to_json(parent.local);
    emit(dump_json(j), ham_out);
    return 0;
  }

  if (cmd_verify->parsed()) {
    MatrixPair pair = resolve_pair(verify_opt);
    std::vector<int> sizes = parse_int_list(verify_n, "--n");
    ParentConstruction parent = build_parent(pair, 0, {}, kRankTol);
    Json results = Json::array();
    bool exported = false;
    for (int n : sizes) {
      ChainHamiltonian chain = assemble_chain(parent.local, n);
      DenseState psi = mps_to_dense(pair, n);
      if (!verify_export.empty() && !exported) {
        write_state_binary(psi, verify_export);
        exported = true;
      }
      SpectrumReport rep = ground_check(chain, {psi});
      Json entry;
      entry["n"] = n;
      entry["report"] = spectrum_report_to_json(rep);
      results.push_back(entry);
    }
    Json j;
    j["interaction_range"] = parent.k;
    j["results"] = results;
    emit(dump_json(j), verify_out);
    return 0;
  }

  if (cmd_corr->parsed()) {
    MatrixPair pair = resolve_pair(corr_opt);
    SiteOperator op = parse_site_operator(corr_op);
    if (corr_rmax < 2) throw std::invalid_argument("--r-max must be at least 2");
    bool finite = corr_n > 0;
    if (finite && corr_rmax > corr_n)
      throw std::invalid_argument("--r-max exceeds the chain size --n");
    Complex one = finite ? expectation_finite(pair, op, corr_n, 1)
                         : expectation_thermodynamic(pair, op);
    struct Row {
      int r;
      Complex two, connected;
    };
    std::vector<Row> rows;
    for (int r = 2; r <= corr_rmax; ++r) {
      Complex two = finite ? two_point_finite(pair, op, r, corr_n)
                           : two_point_thermodynamic(pair, op, r);
      rows.push_back({r, two, two - one * one});
    }
    if (corr_format == "csv") {
      std::ostringstream out;
      out << "r,re_two_point,im_two_point,re_connected,im_connected\n";
      for (const Row& row : rows)
        out << row.r << ',' << format_double(row.two.real()) << ','
            << format_double(row.two.imag()) << ',' << format_double(row.connected.real()) << ','
            << format_double(row.connected.imag()) << '\n';
      emit(out.str(), corr_out);
    } else {
      Json j;
      j["one_point"] = complex_to_json(one);
      double xi = correlation_length(pair, op);
      j["xi"] = std::isinf(xi) ? Json("inf") : Json(xi);
      Json table = Json::array();
      for (const Row& row : rows) {
        Json rj;
        rj["r"] = row.r;
        rj["two_point"] = complex_to_json(row.two);
        rj["connected"] = complex_to_json(row.connected);
        table.push_back(rj);
      }
      j["table"] = table;
      emit(dump_json(j), corr_out);
    }
    return 0;
  }

  if (cmd_eqv->parsed()) {
    MatrixPair p1 = resolve_pair(eqv_opt1);
    MatrixPair p2 = resolve_pair(eqv_opt2);
    auto eqv = equivalence_witness(p1, p2);
    Json j;
    if (!eqv) {
      j["equivalent"] = false;
    } else {
      j["equivalent"] = true;
      j["s"] = matrix_to_json(eqv->first);
      j["mu"] = complex_to_json(eqv->second);
      Matrix2 si = eqv->first.inverse();
      double resid = std::max(
          (eqv->first * p1.a0 * si - eqv->second * p2.a0).norm(),
          (eqv->first * p1.a1 * si - eqv->second * p2.a1).norm());
      j["residual"] = resid;
    }
    emit(dump_json(j), eqv_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mps2::null_state_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const mps2::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
