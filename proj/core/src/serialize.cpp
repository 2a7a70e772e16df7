#include "entsep/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace entsep {

namespace {

using nlohmann::json;

json matrix_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix parse_matrix(const json& j) {
  if (!j.is_object() || !j.contains("re")) throw FormatError("matrix JSON needs an \"re\" array");
  const json& re = j.at("re");
  if (!re.is_array() || re.empty()) throw FormatError("\"re\" must be a nonempty array of rows");
  const auto rows = static_cast<int>(re.size());
  const auto cols = static_cast<int>(re.front().size());
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  const bool has_im = j.contains("im");
  if (has_im && (!j.at("im").is_array() || static_cast<int>(j.at("im").size()) != rows)) {
    throw FormatError("\"im\" must match \"re\"");
  }
  for (int r = 0; r < rows; ++r) {
    const json& row = re[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) throw FormatError("ragged \"re\" rows");
    for (int c = 0; c < cols; ++c) m(r, c).real(row[static_cast<std::size_t>(c)].get<double>());
    if (has_im) {
      const json& irow = j.at("im")[static_cast<std::size_t>(r)];
      if (!irow.is_array() || static_cast<int>(irow.size()) != cols) throw FormatError("ragged \"im\" rows");
      for (int c = 0; c < cols; ++c) m(r, c).imag(irow[static_cast<std::size_t>(c)].get<double>());
    }
  }
  return m;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

json alpha_json(const std::optional<double>& a) {
  if (!a) return nullptr;
  if (std::isinf(*a)) return "inf";
  return *a;
}

CriterionRequest parse_request(const json& j) {
  if (j.is_string()) return parse_criterion_request(j.get<std::string>());
  if (!j.is_object() || !j.contains("name")) throw FormatError("criterion entry needs a name");
  std::string text = j.at("name").get<std::string>();
  if (j.contains("alpha") && !j.at("alpha").is_null()) {
    const json& a = j.at("alpha");
    text += ":" + (a.is_string() ? a.get<std::string>() : std::to_string(a.get<double>()));
  } else if (j.contains("side")) {
    text += ":";
  }
  if (j.contains("side")) text += ":" + j.at("side").get<std::string>();
  CriterionRequest req = parse_criterion_request(text);
  return req;
}

}  // namespace

std::string state_to_json(const DensityMatrix& rho) {
  json j = matrix_json(rho.matrix());
  j["dims"] = rho.dims().factors();
  return j.dump();
}

DensityMatrix state_from_json(const std::string& text) {
  const json j = parse_text(text);
  const ComplexMatrix m = parse_matrix(j);
  if (m.rows() != m.cols()) throw FormatError("state matrix must be square");
  std::vector<int> dims;
  if (j.contains("dims")) {
    dims = j.at("dims").get<std::vector<int>>();
  } else {
    dims = {static_cast<int>(m.rows())};
  }
  return DensityMatrix(m, DimSpec(dims));
}

std::string matrix_to_json(const ComplexMatrix& m) { return matrix_json(m).dump(); }

ComplexMatrix matrix_from_json(const std::string& text) { return parse_matrix(parse_text(text)); }

std::string report_to_json(const CriterionReport& r) {
  json j;
  j["name"] = r.name;
  j["alpha"] = alpha_json(r.alpha);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["satisfied"] = r.satisfied;
  j["assumption_ok"] = r.assumption_ok ? json(*r.assumption_ok) : json(nullptr);
  j["tol"] = r.tol;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

std::string witness_to_json(const MultiCopyWitness& w) {
  json j;
  const auto side = static_cast<int>(w.op.rows());
  if (side <= 256) {
    j = matrix_json(w.to_dense());
  } else {
    json entries = json::array();
    for (int k = 0; k < w.op.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(w.op, k); it; ++it)
        entries.push_back({k, static_cast<int>(it.col()), it.value().real(), it.value().imag()});
    j["entries"] = std::move(entries);
  }
  j["dims"] = std::vector<int>(static_cast<std::size_t>(w.copies), w.per_copy_side());
  j["source"] = w.source;
  j["copies"] = w.copies;
  j["per_copy_dims"] = w.per_copy_dims.factors();
  return j.dump();
}

ScanSpec scan_spec_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw FormatError("scan spec must be a JSON object");
  ScanSpec spec;
  try {
    spec.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("fixed")) spec.fixed = j.at("fixed").get<std::map<std::string, double>>();
    for (const json& a : j.at("axes")) {
      spec.axes.push_back(Axis{a.at("name").get<std::string>(), a.at("min").get<double>(), a.at("max").get<double>(),
                               a.at("steps").get<int>()});
    }
    if (j.contains("criteria"))
      for (const json& c : j.at("criteria")) spec.criteria.push_back(parse_request(c));
    if (j.contains("u")) {
      const json& u = j.at("u");
      if (u.is_string()) {
        const std::string s = u.get<std::string>();
        if (s == "auto") {
          spec.u_choice = UChoice::Auto;
        } else if (s == "canonical") {
          spec.u_choice = UChoice::Canonical;
        } else if (s == "spin_flip") {
          spec.u_choice = UChoice::SpinFlip;
        } else {
          throw FormatError("u must be auto, canonical, spin_flip or a matrix object");
        }
      } else {
        spec.u_choice = UChoice::Custom;
        spec.custom_u = parse_matrix(u);
      }
    }
    if (j.contains("tol")) spec.options.tol = j.at("tol").get<double>();
    if (j.contains("assumption_tol")) spec.options.assumption_tol = j.at("assumption_tol").get<double>();
    if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed scan spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string scan_spec_to_json(const ScanSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  j["fixed"] = spec.fixed;
  json axes = json::array();
  for (const Axis& a : spec.axes) axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  j["axes"] = std::move(axes);
  json crit = json::array();
  for (const auto& c : spec.criteria) {
    json e{{"name", c.name}, {"alpha", alpha_json(c.alpha)}};
    if (c.side) e["side"] = *c.side == Side::A ? "A" : "B";
    crit.push_back(std::move(e));
  }
  j["criteria"] = std::move(crit);
  switch (spec.u_choice) {
    case UChoice::Auto: j["u"] = "auto"; break;
    case UChoice::Canonical: j["u"] = "canonical"; break;
    case UChoice::SpinFlip: j["u"] = "spin_flip"; break;
    case UChoice::Custom: j["u"] = matrix_json(*spec.custom_u); break;
  }
  j["tol"] = spec.options.tol;
  j["assumption_tol"] = spec.options.assumption_tol;
  j["threads"] = spec.threads;
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace entsep
