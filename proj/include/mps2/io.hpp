#pragma once

// File formats and deterministic text output: matrix-pair JSON files,
// canonical forms, witnesses, spectral records (CSV), crossing and
// comparison reports, binary state export. All floats are written in
// shortest round-trip form, so identical inputs give byte-identical output.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mps2/classify.hpp"
#include "mps2/ed.hpp"
#include "mps2/parent_ham.hpp"
#include "mps2/scan.hpp"

namespace mps2 {

using Json = nlohmann::ordered_json;

// Shortest representation that round-trips (<= 17 significant digits).
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex entry must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix2 matrix2_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("field '" + field + "' must be a 2x2 row-major matrix");
  Matrix2 m;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2)
      throw std::invalid_argument("field '" + field + "' must be a 2x2 row-major matrix");
    for (int c = 0; c < 2; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

// Pair file: {"a0": [[[re,im],[re,im]],[[re,im],[re,im]]], "a1": ...}
inline Json pair_to_json(const MatrixPair& p) {
  Json j;
  j["a0"] = matrix_to_json(p.a0);
  j["a1"] = matrix_to_json(p.a1);
  return j;
}

inline MatrixPair pair_from_json(const Json& j) {
  if (!j.contains("a0")) throw std::invalid_argument("pair file: missing field 'a0'");
  if (!j.contains("a1")) throw std::invalid_argument("pair file: missing field 'a1'");
  return MatrixPair(matrix2_from_json(j["a0"], "a0"), matrix2_from_json(j["a1"], "a1"));
}

inline MatrixPair load_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pair file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed pair file '" + path + "': " + e.what());
  }
  return pair_from_json(j);
}

inline Json canonical_form_to_json(const CanonicalForm& f) {
  Json j;
  j["tag"] = to_string(f.tag);
  if (f.tag == ModelTag::A) {
    j["g"] = f.g;
    j["theta"] = f.theta;
  } else if (f.tag == ModelTag::B) {
    j["g"] = f.g;
    j["c"] = f.c;
  } else if (f.tag == ModelTag::C) {
    j["g"] = f.g;
    j["u"] = f.u;
  }
  if (f.tag != ModelTag::Degenerate) {
    j["epsilon"] = f.epsilon;
    Json gauge;
    gauge["u"] = matrix_to_json(f.gauge_u);
    gauge["mu"] = complex_to_json(f.gauge_mu);
    j["gauge"] = gauge;
    j["swapped_roles"] = f.swapped_roles;
  }
  if (!f.notes.empty()) j["notes"] = f.notes;
  return j;
}

inline Json spin_flip_to_json(const SpinFlipWitness& w, double residual) {
  Json j;
  j["x"] = matrix_to_json(w.x);
  j["epsilon"] = w.epsilon;
  j["residual"] = residual;
  return j;
}

inline Json parity_to_json(const ParityWitness& w, double residual) {
  Json j;
  j["omega"] = matrix_to_json(w.omega);
  j["sigma"] = w.sigma;
  j["residual"] = residual;
  return j;
}

inline Json pauli_to_json(const PauliDecomposition& d) {
  Json j;
  for (const auto& [word, coeff] : d.terms) j[word] = coeff;
  return j;
}

inline Json local_hamiltonian_to_json(const LocalHamiltonian& h) {
  Json j;
  j["k"] = h.k;
  Json terms = Json::array();
  for (const auto& [vec, weight] : h.projector_terms) {
    Json t;
    t["weight"] = weight;
    Json v = Json::array();
    for (Eigen::Index i = 0; i < vec.size(); ++i) v.push_back(complex_to_json(vec(i)));
    t["vector"] = v;
    terms.push_back(t);
  }
  j["projector_terms"] = terms;
  j["dense"] = matrix_to_json(h.dense);  // row-major complex array
  return j;
}

inline Json comparison_to_json(const ComparisonReport& r) {
  Json j;
  j["target"] = r.target;
  Json ours, printed;
  for (const auto& [w, c] : r.ours) ours[w] = c;
  for (const auto& [w, c] : r.printed) printed[w] = c;
  j["constructed"] = ours;
  j["printed"] = printed;
  j["scale"] = r.scale;
  j["identity_shift"] = r.shift;
  j["residual"] = r.residual;
  j["matches"] = r.matches;
  if (!r.matches)
    j["discrepancy"] =
        "printed form not reproduced by the projector construction; "
        "constructed coefficients are ground truth";
  return j;
}

inline Json crossing_report_to_json(const CrossingReport& r) {
  Json arr = Json::array();
  for (const Crossing& c : r.crossings) {
    Json j;
    j["type"] = c.type == CrossingType::max_crossing ? "max-crossing" : "second-kink";
    j["location"] = c.location;
    j["bracket"] = Json::array({c.bracket_lo, c.bracket_hi});
    arr.push_back(j);
  }
  Json out;
  out["crossings"] = arr;
  return out;
}

inline Json spectrum_report_to_json(const SpectrumReport& r) {
  Json j;
  j["rayleigh_only"] = r.rayleigh_only;
  Json ray = Json::array();
  for (double v : r.rayleigh) ray.push_back(v);
  j["rayleigh"] = ray;
  if (!r.rayleigh_only) {
    j["lambda_min"] = r.lambda_min;
    j["h_norm"] = r.h_norm;
    j["ground_dim"] = r.ground_dim;
    Json low = Json::array();
    for (Eigen::Index i = 0; i < r.lowest.size(); ++i) low.push_back(r.lowest(i));
    j["lowest"] = low;
    Json ov = Json::array();
    for (double v : r.overlaps) ov.push_back(v);
    j["ground_overlaps"] = ov;
  }
  return j;
}

// CSV: one row per grid point.
inline std::string records_to_csv(const std::vector<SpectralRecord>& records) {
  std::ostringstream out;
  out << "param1,param2,re_lambda0,im_lambda0,re_lambda1,im_lambda1,"
         "re_lambda2,im_lambda2,re_lambda3,im_lambda3,xi,degenerate_flag\n";
  for (const SpectralRecord& r : records) {
    out << format_double(r.params[0]) << ',' << format_double(r.params[1]);
    for (const Complex& l : r.eigenvalues)
      out << ',' << format_double(l.real()) << ',' << format_double(l.imag());
    out << ',' << format_double(r.xi) << ',' << (r.degeneracy > 1 ? 1 : 0) << '\n';
  }
  return out.str();
}

// Little-endian float64 (re, im) pairs, amplitude index ascending.
inline void write_state_binary(const DenseState& st, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  for (Eigen::Index i = 0; i < st.amplitudes.size(); ++i) {
    double re = st.amplitudes(i).real(), im = st.amplitudes(i).imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof(double));
    out.write(reinterpret_cast<const char*>(&im), sizeof(double));
  }
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mps2
