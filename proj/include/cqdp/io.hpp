#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cqdp/dp.hpp"
#include "cqdp/errors.hpp"
#include "cqdp/hermitian.hpp"

namespace cqdp {

// On-disk tuple document. `payload` holds probability rows for kind
// "classical" and row-major matrices of [re, im] pairs for kind "density".
struct TupleDocument {
  std::variant<ClassicalTuple, DensityTuple> payload;
  std::optional<double> eps_hint;
  std::map<std::string, std::string> metadata;

  bool is_classical() const { return payload.index() == 0; }
  const ClassicalTuple& classical() const { return std::get<ClassicalTuple>(payload); }
  const DensityTuple& density() const { return std::get<DensityTuple>(payload); }
};

namespace detail {

inline double number_at(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("expected a number at " + where);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError("non-finite number at " + where);
  return v;
}

inline ClassicalTuple parse_classical_payload(const nlohmann::json& payload) {
  if (!payload.is_array() || payload.size() < 2)
    throw ParseError("payload must be an array of at least 2 probability rows");
  std::vector<ProbabilityVector> rows;
  rows.reserve(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) {
    const auto& row = payload[i];
    const std::string where = "payload[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) throw ParseError("expected a nonempty row at " + where);
    std::vector<double> w;
    w.reserve(row.size());
    for (std::size_t k = 0; k < row.size(); ++k)
      w.push_back(number_at(row[k], where + "[" + std::to_string(k) + "]"));
    if (!rows.empty() && w.size() != static_cast<std::size_t>(rows.front().dim()))
      throw ValidationError("ragged payload: " + where + " has a different length");
    double sum = 0.0;
    for (double x : w) {
      if (x < -1e-12) throw ValidationError("probability nonnegativity violated at " + where);
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw ValidationError("probability normalization violated at " + where);
    rows.emplace_back(std::move(w));
  }
  return ClassicalTuple(std::move(rows));
}

inline DensityTuple parse_density_payload(const nlohmann::json& payload) {
  if (!payload.is_array() || payload.size() < 2)
    throw ParseError("payload must be an array of at least 2 matrices");
  std::vector<HermitianMatrix> states;
  states.reserve(payload.size());
  for (std::size_t m = 0; m < payload.size(); ++m) {
    const auto& mat = payload[m];
    const std::string mwhere = "payload[" + std::to_string(m) + "]";
    if (!mat.is_array() || mat.empty()) throw ParseError("expected a matrix (array of rows) at " + mwhere);
    const std::size_t dim = mat.size();
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const auto& row = mat[r];
      const std::string rwhere = mwhere + "[" + std::to_string(r) + "]";
      if (!row.is_array() || row.size() != dim)
        throw ParseError("matrix row at " + rwhere + " must have " + std::to_string(dim) + " entries");
      for (std::size_t c = 0; c < dim; ++c) {
        const auto& cell = row[c];
        const std::string cwhere = rwhere + "[" + std::to_string(c) + "]";
        if (!cell.is_array() || cell.size() != 2)
          throw ParseError("expected an [re, im] pair at " + cwhere);
        entries.emplace_back(number_at(cell[0], cwhere + "[0]"), number_at(cell[1], cwhere + "[1]"));
      }
    }
    try {
      HermitianMatrix h(static_cast<int>(dim), std::move(entries));
      if (std::abs(h.trace() - 1.0) > 1e-10)
        throw ValidationError("unit trace violated at " + mwhere);
      if (!is_psd(h, 1e-9)) throw ValidationError("positive semidefiniteness violated at " + mwhere);
      states.push_back(std::move(h));
    } catch (const InvalidInput& e) {
      throw ValidationError("hermitian symmetry violated at " + mwhere + ": " + e.what());
    }
  }
  try {
    return DensityTuple(std::move(states));
  } catch (const InvalidInput& e) {
    throw ValidationError(std::string("density tuple invariant violated: ") + e.what());
  }
}

}  // namespace detail

inline TupleDocument parse_tuple(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document root must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw ParseError("missing string field \"kind\"");
  const std::string kind = doc["kind"].get<std::string>();
  if (!doc.contains("payload")) throw ParseError("missing field \"payload\"");

  std::optional<double> eps_hint;
  if (doc.contains("eps_hint") && !doc["eps_hint"].is_null())
    eps_hint = detail::number_at(doc["eps_hint"], "eps_hint");
  std::map<std::string, std::string> metadata;
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) throw ParseError("metadata must be an object of strings");
    for (const auto& [k, v] : doc["metadata"].items()) {
      if (!v.is_string()) throw ParseError("metadata value at \"" + k + "\" must be a string");
      metadata[k] = v.get<std::string>();
    }
  }

  if (kind == "classical")
    return TupleDocument{detail::parse_classical_payload(doc["payload"]), eps_hint,
                         std::move(metadata)};
  if (kind == "density")
    return TupleDocument{detail::parse_density_payload(doc["payload"]), eps_hint,
                         std::move(metadata)};
  throw ParseError("kind must be \"classical\" or \"density\", got \"" + kind + "\"");
}

inline std::string emit_tuple(const TupleDocument& doc) {
  // negative zeros are folded away so that emit(parse(emit(t))) is the
  // identity on text, not only on values
  const auto canon = [](double v) { return v + 0.0; };
  nlohmann::ordered_json j;
  j["kind"] = doc.is_classical() ? "classical" : "density";
  if (doc.eps_hint) j["eps_hint"] = *doc.eps_hint;
  if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
  nlohmann::ordered_json payload = nlohmann::ordered_json::array();
  if (doc.is_classical()) {
    const ClassicalTuple& t = doc.classical();
    for (int i = 0; i < t.size(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (double w : t[i].weights()) row.push_back(canon(w));
      payload.push_back(std::move(row));
    }
  } else {
    const DensityTuple& t = doc.density();
    for (int i = 0; i < t.size(); ++i) {
      nlohmann::ordered_json mat = nlohmann::ordered_json::array();
      for (int r = 0; r < t.dim(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < t.dim(); ++c) {
          const Complex z = t[i](r, c);
          row.push_back(nlohmann::ordered_json::array({canon(z.real()), canon(z.imag())}));
        }
        mat.push_back(std::move(row));
      }
      payload.push_back(std::move(mat));
    }
  }
  j["payload"] = std::move(payload);
  return j.dump(2) + "\n";
}

inline std::string emit_tuple(const ClassicalTuple& t,
                              std::optional<double> eps_hint = std::nullopt,
                              std::map<std::string, std::string> metadata = {}) {
  return emit_tuple(TupleDocument{t, eps_hint, std::move(metadata)});
}

inline std::string emit_tuple(const DensityTuple& t,
                              std::optional<double> eps_hint = std::nullopt,
                              std::map<std::string, std::string> metadata = {}) {
  return emit_tuple(TupleDocument{t, eps_hint, std::move(metadata)});
}

// 17 significant digits: enough for binary64 text round-trips.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Accepts plain decimals plus "ln<x>" literals (e.g. "ln2" for the natural
// log of 2), the convenient way to land exactly on e^eps = 2.
inline double parse_number_literal(const std::string& text) {
  std::size_t pos = 0;
  std::string body = text;
  bool take_log = false;
  if (body.rfind("ln", 0) == 0) {
    take_log = true;
    body = body.substr(2);
  }
  double v;
  try {
    v = std::stod(body, &pos);
  } catch (const std::exception&) {
    throw ParseError("cannot parse number \"" + text + "\"");
  }
  if (pos != body.size()) throw ParseError("trailing characters in number \"" + text + "\"");
  if (take_log) {
    if (!(v > 0.0)) throw ParseError("ln literal needs a positive argument: \"" + text + "\"");
    v = std::log(v);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite number \"" + text + "\"");
  return v;
}

// One record of a parameter sweep; unset columns stay empty in the CSV.
struct SweepRow {
  std::optional<double> eps, theta;
  std::optional<int> n, d;
  std::optional<double> c, t;
  std::string quantity;
  double value = 0.0;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "eps,theta,n,d,c,t,quantity,value\n";
  const auto opt_num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  const auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const SweepRow& r : rows) {
    out += opt_num(r.eps) + ',' + opt_num(r.theta) + ',' + opt_int(r.n) + ',' + opt_int(r.d) + ',' +
           opt_num(r.c) + ',' + opt_num(r.t) + ',' + r.quantity + ',' + format_number(r.value) + '\n';
  }
  return out;
}

}  // namespace cqdp
