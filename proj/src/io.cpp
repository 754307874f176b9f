#include "cher/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

namespace cher::io {

namespace fs = std::filesystem;

SchemaError::SchemaError(const std::string& pointer, const std::string& message)
    : ValidationError("schema error at " + (pointer.empty() ? std::string("/") : pointer) + ": " + message),
      pointer_(pointer) {}

namespace {

// Tracks which members of a JSON object were consumed so that leftovers can
// be reported as unknown fields.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "/" + key; }

  const Json& req(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) throw SchemaError(at(key), "missing required field");
    used_.insert(key);
    return *it;
  }

  const Json* opt(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) {
      if (it != j_.end()) used_.insert(key);
      return nullptr;
    }
    used_.insert(key);
    return &*it;
  }

  double number(const std::string& key) { return as_number(req(key), at(key)); }
  int integer(const std::string& key) { return as_integer(req(key), at(key)); }
  std::string string(const std::string& key) { return as_string(req(key), at(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw SchemaError(at(it.key()), "unknown field");
    }
  }

  static double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    return v.get<double>();
  }
  static int as_integer(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    return v.get<int>();
  }
  static std::string as_string(const Json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path, "expected a string");
    return v.get<std::string>();
  }
  static const Json& as_array(const Json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected an array");
    return v;
  }
  static Complex as_complex(const Json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected [re, im]");
    return {as_number(v[0], path + "/0"), as_number(v[1], path + "/1")};
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void check_header(Reader& r, const std::string& kind) {
  const std::string format = r.string("format");
  if (format != kFormatVersion) {
    throw SchemaError(r.at("format"), "file format '" + format + "' needs an upgrade to '" + kFormatVersion + "'");
  }
  const std::string k = r.string("kind");
  if (k != kind) throw SchemaError(r.at("kind"), "expected kind '" + kind + "', found '" + k + "'");
  if (const Json* h = r.opt("config_hash")) Reader::as_string(*h, r.at("config_hash"));
}

Json header(const std::string& kind, const std::string& config_hash) {
  Json j;
  j["format"] = kFormatVersion;
  j["kind"] = kind;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::vector<double> number_array(const Json& v, const std::string& path) {
  Reader::as_array(v, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Reader::as_number(v[i], path + "/" + std::to_string(i)));
  return out;
}

std::string csv_header(const std::string& kind, const std::string& config_hash) {
  std::string s = std::string("# format ") + kFormatVersion + "\n# kind " + kind + "\n";
  if (!config_hash.empty()) s += "# config_hash " + config_hash + "\n";
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw SchemaError(where, "expected a number, found '" + t + "'");
  }
  return v;
}

// Comment metadata ("# key rest") and data rows of a CSV document.
struct CsvDocument {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : meta) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  const std::string& require_meta(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw SchemaError("/" + key, "missing required field");
    return *v;
  }
};

CsvDocument parse_csv(const std::string& text) {
  CsvDocument doc;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto space = body.find(' ');
      doc.meta.emplace_back(body.substr(0, space), space == std::string::npos ? "" : trim(body.substr(space + 1)));
      continue;
    }
    if (doc.columns.empty()) {
      for (const auto& c : split(line, ',')) doc.columns.push_back(trim(c));
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != doc.columns.size()) {
      throw SchemaError("/rows/" + std::to_string(doc.rows.size()),
                        "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(doc.columns.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row.push_back(parse_double(cells[c], "/rows/" + std::to_string(doc.rows.size()) + "/" + doc.columns[c]));
    }
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

void check_csv_header(const CsvDocument& doc, const std::string& kind) {
  const std::string& format = doc.require_meta("format");
  if (format != kFormatVersion) {
    throw SchemaError("/format", "file format '" + format + "' needs an upgrade to '" + kFormatVersion + "'");
  }
  const std::string& k = doc.require_meta("kind");
  if (k != kind) throw SchemaError("/kind", "expected kind '" + kind + "', found '" + k + "'");
}

// "key=value" tokens of a metadata line.
std::string token(const std::string& line, const std::string& key, const std::string& where) {
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  }
  throw SchemaError(where + "/" + key, "missing required field");
}

std::string extension(const fs::path& path) {
  std::string e = path.extension().string();
  for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ValidationError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ChiSeries

Json to_json(const ChiSeries& c, const std::string& config_hash) {
  Json j = header("chi_series", config_hash);
  j["n"] = c.n;
  j["generator_order"] = kGeneratorOrder;
  j["times"] = c.times;
  Json chi = Json::array();
  for (const auto& m : c.chi) {
    Json row = Json::array();
    for (Eigen::Index l = 0; l < m.rows(); ++l) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(l, k)));
    }
    chi.push_back(std::move(row));
  }
  j["chi"] = std::move(chi);
  return j;
}

ChiSeries chi_series_from_json(const Json& j) {
  Reader r(j, "");
  check_header(r, "chi_series");
  ChiSeries c;
  c.n = r.integer("n");
  if (c.n < 2) throw SchemaError(r.at("n"), "n must be at least 2");
  const std::string order = r.string("generator_order");
  if (order != kGeneratorOrder) {
    throw SchemaError(r.at("generator_order"), "unsupported generator order '" + order + "'");
  }
  c.times = number_array(r.req("times"), r.at("times"));
  const Json& chi = Reader::as_array(r.req("chi"), r.at("chi"));
  if (chi.size() != c.times.size()) throw SchemaError(r.at("chi"), "expected one matrix per time");
  const int size = c.n * c.n;
  for (std::size_t t = 0; t < chi.size(); ++t) {
    const std::string p = r.at("chi") + "/" + std::to_string(t);
    Reader::as_array(chi[t], p);
    if (chi[t].size() != static_cast<std::size_t>(size) * size) {
      throw SchemaError(p, "expected " + std::to_string(size * size) + " entries");
    }
    CMatrix m(size, size);
    for (int l = 0; l < size; ++l) {
      for (int k = 0; k < size; ++k) {
        const std::size_t idx = static_cast<std::size_t>(l) * size + k;
        m(l, k) = Reader::as_complex(chi[t][idx], p + "/" + std::to_string(idx));
      }
    }
    c.chi.push_back(std::move(m));
  }
  r.finish();
  return c;
}

void save_chi_series(const fs::path& path, const ChiSeries& c, const std::string& config_hash) {
  write_atomic(path, to_json(c, config_hash).dump(1) + "\n");
}

ChiSeries load_chi_series(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return chi_series_from_json(j);
}

// QuasiDistribution

Json to_json(const QuasiDistribution& q, const std::string& config_hash) {
  Json j = header("quasi_distribution", config_hash);
  j["space"] = to_string(q.space);
  j["labels"] = q.labels;
  j["origin"] = std::vector<double>(q.origin.data(), q.origin.data() + q.origin.size());
  Json basis = Json::array();
  for (Eigen::Index d = 0; d < q.basis.cols(); ++d) {
    basis.push_back(std::vector<double>(q.basis.col(d).data(), q.basis.col(d).data() + q.basis.rows()));
  }
  j["basis"] = std::move(basis);
  j["counts"] = q.counts;
  j["values"] = q.values;
  Json deltas = Json::array();
  for (const auto& d : q.deltas) deltas.push_back({{"label", d.label}, {"location", d.location}, {"mass", d.mass}});
  j["deltas"] = std::move(deltas);
  return j;
}

QuasiDistribution quasi_from_json(const Json& j) {
  Reader r(j, "");
  check_header(r, "quasi_distribution");
  QuasiDistribution q;
  try {
    q.space = parse_space(r.string("space"));
  } catch (const ValidationError& e) {
    throw SchemaError(r.at("space"), e.what());
  }
  const Json& labels = Reader::as_array(r.req("labels"), r.at("labels"));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    q.labels.push_back(Reader::as_string(labels[i], r.at("labels") + "/" + std::to_string(i)));
  }
  const auto dims = static_cast<Eigen::Index>(q.labels.size());
  const auto origin = number_array(r.req("origin"), r.at("origin"));
  if (static_cast<Eigen::Index>(origin.size()) != dims) throw SchemaError(r.at("origin"), "length differs from labels");
  q.origin = Eigen::Map<const RVector>(origin.data(), dims);
  const Json& basis = Reader::as_array(r.req("basis"), r.at("basis"));
  if (static_cast<Eigen::Index>(basis.size()) != dims) throw SchemaError(r.at("basis"), "expected one column per axis");
  q.basis.resize(dims, dims);
  for (Eigen::Index d = 0; d < dims; ++d) {
    const std::string p = r.at("basis") + "/" + std::to_string(d);
    const auto col = number_array(basis[static_cast<std::size_t>(d)], p);
    if (static_cast<Eigen::Index>(col.size()) != dims) throw SchemaError(p, "column length differs from labels");
    q.basis.col(d) = Eigen::Map<const RVector>(col.data(), dims);
  }
  const Json& counts = Reader::as_array(r.req("counts"), r.at("counts"));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    q.counts.push_back(Reader::as_integer(counts[i], r.at("counts") + "/" + std::to_string(i)));
  }
  q.values = number_array(r.req("values"), r.at("values"));
  const Json& deltas = Reader::as_array(r.req("deltas"), r.at("deltas"));
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    Reader d(deltas[i], r.at("deltas") + "/" + std::to_string(i));
    DeltaFactor f;
    f.label = d.string("label");
    f.location = d.number("location");
    f.mass = d.number("mass");
    d.finish();
    q.deltas.push_back(f);
  }
  r.finish();
  q.validate();
  return q;
}

std::string to_csv(const QuasiDistribution& q, const std::string& config_hash) {
  q.validate();
  std::string s = csv_header("quasi_distribution", config_hash);
  s += "# space " + to_string(q.space) + "\n";
  const bool aligned = q.axis_aligned(0.0);
  for (int d = 0; d < q.dims(); ++d) {
    s += "# axis " + q.labels[static_cast<std::size_t>(d)];
    if (aligned) {
      s += " min=" + format_double(q.origin(d)) + " step=" + format_double(q.basis(d, d));
    }
    s += " n=" + std::to_string(q.counts[static_cast<std::size_t>(d)]) + "\n";
  }
  if (!aligned) {
    s += "# origin";
    for (int d = 0; d < q.dims(); ++d) s += " " + format_double(q.origin(d));
    s += "\n";
    for (int d = 0; d < q.dims(); ++d) {
      s += "# basis " + std::to_string(d);
      for (int e = 0; e < q.dims(); ++e) s += " " + format_double(q.basis(e, d));
      s += "\n";
    }
  }
  for (const auto& d : q.deltas) {
    s += "# delta " + d.label + " at " + format_double(d.location) + " mass=" + format_double(d.mass) + "\n";
  }
  for (const auto& l : q.labels) s += l + ",";
  s += "value\n";
  for (std::size_t c = 0; c < q.values.size(); ++c) {
    const RVector p = q.point(c);
    for (Eigen::Index d = 0; d < p.size(); ++d) s += format_double(p(d)) + ",";
    s += format_double(q.values[c]) + "\n";
  }
  return s;
}

QuasiDistribution quasi_from_csv(const std::string& text) {
  const CsvDocument doc = parse_csv(text);
  check_csv_header(doc, "quasi_distribution");
  QuasiDistribution q;
  if (const std::string* space = doc.find("space")) {
    try {
      q.space = parse_space(*space);
    } catch (const ValidationError& e) {
      throw SchemaError("/space", e.what());
    }
  }
  std::vector<double> mins, steps;
  std::vector<std::string> origin_line;
  std::vector<std::vector<std::string>> basis_lines;
  for (const auto& [key, rest] : doc.meta) {
    if (key == "axis") {
      const std::string where = "/axis/" + std::to_string(q.labels.size());
      std::istringstream in(rest);
      std::string label;
      in >> label;
      if (label.empty()) throw SchemaError(where + "/label", "missing required field");
      q.labels.push_back(label);
      q.counts.push_back(static_cast<int>(parse_double(token(rest, "n", where), where + "/n")));
      if (rest.find("min=") != std::string::npos) {
        mins.push_back(parse_double(token(rest, "min", where), where + "/min"));
        steps.push_back(parse_double(token(rest, "step", where), where + "/step"));
      }
    } else if (key == "delta") {
      const std::string where = "/delta/" + std::to_string(q.deltas.size());
      std::istringstream in(rest);
      std::string label, at, location;
      in >> label >> at >> location;
      if (label.empty() || at != "at" || location.empty()) throw SchemaError(where, "expected '<label> at <location>'");
      DeltaFactor d;
      d.label = label;
      d.location = parse_double(location, where + "/location");
      if (rest.find("mass=") != std::string::npos) d.mass = parse_double(token(rest, "mass", where), where + "/mass");
      q.deltas.push_back(d);
    } else if (key == "origin") {
      std::istringstream in(rest);
      std::string v;
      while (in >> v) origin_line.push_back(v);
    } else if (key == "basis") {
      std::istringstream in(rest);
      std::vector<std::string> items;
      std::string v;
      while (in >> v) items.push_back(v);
      basis_lines.push_back(items);
    }
  }
  const auto dims = static_cast<Eigen::Index>(q.labels.size());
  q.origin.resize(dims);
  q.basis = RMatrix::Zero(dims, dims);
  if (mins.size() == q.labels.size()) {
    for (Eigen::Index d = 0; d < dims; ++d) {
      q.origin(d) = mins[static_cast<std::size_t>(d)];
      q.basis(d, d) = steps[static_cast<std::size_t>(d)];
    }
  } else {
    if (static_cast<Eigen::Index>(origin_line.size()) != dims) throw SchemaError("/origin", "missing required field");
    if (static_cast<Eigen::Index>(basis_lines.size()) != dims) throw SchemaError("/basis", "missing required field");
    for (Eigen::Index d = 0; d < dims; ++d) q.origin(d) = parse_double(origin_line[static_cast<std::size_t>(d)], "/origin");
    for (Eigen::Index d = 0; d < dims; ++d) {
      const auto& line = basis_lines[static_cast<std::size_t>(d)];
      const std::string where = "/basis/" + std::to_string(d);
      if (static_cast<Eigen::Index>(line.size()) != dims + 1) throw SchemaError(where, "wrong number of entries");
      for (Eigen::Index e = 0; e < dims; ++e) q.basis(e, d) = parse_double(line[static_cast<std::size_t>(e + 1)], where);
    }
  }
  if (dims > 0) {
    if (doc.columns.empty()) throw SchemaError("/columns", "missing required field");
    if (doc.columns.back() != "value") throw SchemaError("/columns", "last column must be 'value'");
    if (doc.columns.size() != q.labels.size() + 1) throw SchemaError("/columns", "expected one column per axis plus value");
    for (const auto& row : doc.rows) q.values.push_back(row.back());
    std::size_t expected = 1;
    for (int c : q.counts) expected *= static_cast<std::size_t>(std::max(c, 0));
    if (q.values.size() != expected) {
      throw SchemaError("/rows/" + std::to_string(q.values.size()),
                        "expected " + std::to_string(expected) + " rows, found " + std::to_string(q.values.size()));
    }
  } else if (q.deltas.empty()) {
    throw SchemaError("/axis", "missing required field");
  }
  q.validate();
  return q;
}

void save_quasi(const fs::path& path, const QuasiDistribution& q, const std::string& config_hash) {
  const std::string ext = extension(path);
  if (ext == ".json") {
    write_atomic(path, to_json(q, config_hash).dump(1) + "\n");
  } else if (ext == ".csv") {
    write_atomic(path, to_csv(q, config_hash));
  } else {
    throw ValidationError("unsupported extension '" + ext + "' for " + path.string() + " (expected .json or .csv)");
  }
}

QuasiDistribution load_quasi(const fs::path& path) {
  const std::string ext = extension(path);
  if (ext != ".json" && ext != ".csv") {
    throw ValidationError("unsupported extension '" + ext + "' for " + path.string() + " (expected .json or .csv)");
  }
  const std::string text = read_file(path);
  if (ext == ".json") {
    try {
      return quasi_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
      throw SchemaError("", std::string("malformed JSON: ") + e.what());
    }
  }
  return quasi_from_csv(text);
}

// ModeConfig

Json to_json(const ModeConfig& cfg) {
  Json j = header("mode_config", "");
  j["qubits"] = cfg.qubits;
  j["fock_cutoff"] = cfg.fock_cutoff;
  j["temperature"] = cfg.temperature;
  j["method"] = to_string(cfg.method);
  j["max_hilbert_dim"] = cfg.max_hilbert_dim;
  j["leakage_tolerance"] = cfg.leakage_tolerance;
  Json modes = Json::array();
  for (const auto& m : cfg.modes) {
    modes.push_back({{"omega", m.omega}, {"g1", complex_json(m.g1)}, {"g2", complex_json(m.g2)}});
  }
  j["modes"] = std::move(modes);
  return j;
}

ModeConfig mode_config_from_json(const Json& j) {
  Reader r(j, "");
  check_header(r, "mode_config");
  ModeConfig cfg;
  if (const Json* v = r.opt("qubits")) cfg.qubits = Reader::as_integer(*v, r.at("qubits"));
  if (const Json* v = r.opt("fock_cutoff")) cfg.fock_cutoff = Reader::as_integer(*v, r.at("fock_cutoff"));
  if (const Json* v = r.opt("temperature")) cfg.temperature = Reader::as_number(*v, r.at("temperature"));
  if (const Json* v = r.opt("method")) {
    try {
      cfg.method = parse_method(Reader::as_string(*v, r.at("method")));
    } catch (const ValidationError& e) {
      throw SchemaError(r.at("method"), e.what());
    }
  }
  if (const Json* v = r.opt("max_hilbert_dim")) cfg.max_hilbert_dim = Reader::as_number(*v, r.at("max_hilbert_dim"));
  if (const Json* v = r.opt("leakage_tolerance")) {
    cfg.leakage_tolerance = Reader::as_number(*v, r.at("leakage_tolerance"));
  }
  const Json& modes = Reader::as_array(r.req("modes"), r.at("modes"));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    Reader m(modes[i], r.at("modes") + "/" + std::to_string(i));
    Mode mode;
    mode.omega = m.number("omega");
    mode.g1 = Reader::as_complex(m.req("g1"), m.at("g1"));
    if (const Json* g2 = m.opt("g2")) mode.g2 = Reader::as_complex(*g2, m.at("g2"));
    m.finish();
    cfg.modes.push_back(mode);
  }
  r.finish();
  cfg.validate();
  return cfg;
}

ModeConfig load_mode_config(const fs::path& path) {
  try {
    return mode_config_from_json(Json::parse(read_file(path)));
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

// NonclassicalityResult

Json to_json(const NonclassicalityResult& r, const std::string& config_hash) {
  Json j;
  j["value"] = r.value;
  j["method"] = to_string(r.method);
  Json grid;
  grid["labels"] = r.grid.labels;
  grid["steps"] = r.grid.steps;
  grid["spans"] = r.grid.spans;
  grid["counts"] = r.grid.counts;
  Json deltas = Json::array();
  for (const auto& d : r.grid.deltas) {
    deltas.push_back({{"label", d.label}, {"location", d.location}, {"mass", d.mass}});
  }
  grid["deltas"] = std::move(deltas);
  j["grid"] = std::move(grid);
  j["refinement_delta"] = r.refinement_delta ? Json(*r.refinement_delta) : Json(nullptr);
  j["span_delta"] = r.span_delta ? Json(*r.span_delta) : Json(nullptr);
  j["delta_note"] = r.delta_note;
  if (r.inversion) {
    const auto& rep = *r.inversion;
    Json inv;
    inv["strategy"] = rep.strategy;
    inv["t_max"] = rep.t_max;
    inv["dt"] = rep.dt;
    inv["samples"] = rep.samples;
    inv["windowed"] = rep.windowed;
    inv["window_fraction"] = rep.window_fraction;
    inv["tail_modulus"] = rep.tail_modulus;
    inv["max_imag_residue"] = rep.max_imag_residue;
    inv["mass_defect"] = rep.mass_defect;
    Json fr = Json::object();
    for (const auto& [name, err] : rep.forward_residuals) fr[name] = err;
    inv["forward_residuals"] = std::move(fr);
    j["inversion"] = std::move(inv);
  }
  if (!r.argmin.empty()) j["argmin"] = r.argmin;
  j["format"] = kFormatVersion;
  j["kind"] = "nonclassicality_result";
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j;
}

NonclassicalityResult result_from_json(const Json& j) {
  Reader r(j, "");
  check_header(r, "nonclassicality_result");
  NonclassicalityResult res;
  res.value = r.number("value");
  const std::string method = r.string("method");
  if (method == "negativity") {
    res.method = NonclassicalityResult::Method::negativity;
  } else if (method == "lp-oracle") {
    res.method = NonclassicalityResult::Method::lp_oracle;
  } else {
    throw SchemaError(r.at("method"), "unknown method '" + method + "'");
  }
  Reader g(r.req("grid"), r.at("grid"));
  const Json& labels = Reader::as_array(g.req("labels"), g.at("labels"));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    res.grid.labels.push_back(Reader::as_string(labels[i], g.at("labels") + "/" + std::to_string(i)));
  }
  res.grid.steps = number_array(g.req("steps"), g.at("steps"));
  res.grid.spans = number_array(g.req("spans"), g.at("spans"));
  const Json& counts = Reader::as_array(g.req("counts"), g.at("counts"));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    res.grid.counts.push_back(Reader::as_integer(counts[i], g.at("counts") + "/" + std::to_string(i)));
  }
  const Json& deltas = Reader::as_array(g.req("deltas"), g.at("deltas"));
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    Reader d(deltas[i], g.at("deltas") + "/" + std::to_string(i));
    res.grid.deltas.push_back({d.string("label"), d.number("location"), d.number("mass")});
    d.finish();
  }
  g.finish();
  if (const Json* v = r.opt("refinement_delta")) res.refinement_delta = Reader::as_number(*v, r.at("refinement_delta"));
  if (const Json* v = r.opt("span_delta")) res.span_delta = Reader::as_number(*v, r.at("span_delta"));
  if (const Json* v = r.opt("delta_note")) res.delta_note = Reader::as_string(*v, r.at("delta_note"));
  if (const Json* v = r.opt("inversion")) {
    Reader inv(*v, r.at("inversion"));
    InversionReport rep;
    rep.strategy = inv.string("strategy");
    rep.t_max = inv.number("t_max");
    rep.dt = inv.number("dt");
    rep.samples = static_cast<std::size_t>(inv.integer("samples"));
    const Json& w = inv.req("windowed");
    if (!w.is_boolean()) throw SchemaError(inv.at("windowed"), "expected a boolean");
    rep.windowed = w.get<bool>();
    rep.window_fraction = inv.number("window_fraction");
    rep.tail_modulus = inv.number("tail_modulus");
    rep.max_imag_residue = inv.number("max_imag_residue");
    rep.mass_defect = inv.number("mass_defect");
    const Json& fr = inv.req("forward_residuals");
    if (!fr.is_object()) throw SchemaError(inv.at("forward_residuals"), "expected an object");
    for (auto it = fr.begin(); it != fr.end(); ++it) {
      rep.forward_residuals.emplace_back(it.key(),
                                         Reader::as_number(it.value(), inv.at("forward_residuals") + "/" + it.key()));
    }
    inv.finish();
    res.inversion = rep;
  }
  if (const Json* v = r.opt("argmin")) res.argmin = number_array(*v, r.at("argmin"));
  r.finish();
  return res;
}

// Dephasing factors and maps

std::string to_csv(const DephasingFactors& f, const std::string& config_hash) {
  std::string s = csv_header("dephasing_factors", config_hash);
  s += "# n " + std::to_string(f.n) + "\n# time_unit " + f.time_unit + "\nt";
  for (const auto& [m, series] : f.factors) {
    s += ",re_phi" + std::to_string(m) + ",im_phi" + std::to_string(m);
  }
  s += "\n";
  for (std::size_t i = 0; i < f.times.size(); ++i) {
    s += format_double(f.times[i]);
    for (const auto& [m, series] : f.factors) {
      s += "," + format_double(series[i].real()) + "," + format_double(series[i].imag());
    }
    s += "\n";
  }
  return s;
}

DephasingFactors factors_from_csv(const std::string& text) {
  const CsvDocument doc = parse_csv(text);
  check_csv_header(doc, "dephasing_factors");
  const int n = static_cast<int>(parse_double(doc.require_meta("n"), "/n"));
  if (doc.columns.empty() || doc.columns[0] != "t") throw SchemaError("/columns/0", "first column must be 't'");
  if (doc.columns.size() % 2 != 1) throw SchemaError("/columns", "expected re/im column pairs");
  std::vector<double> times;
  std::map<int, std::vector<Complex>> factors;
  std::vector<int> indices;
  for (std::size_t c = 1; c < doc.columns.size(); c += 2) {
    const std::string& re = doc.columns[c];
    const std::string& im = doc.columns[c + 1];
    if (re.rfind("re_phi", 0) != 0 || im != "im_phi" + re.substr(6)) {
      throw SchemaError("/columns/" + std::to_string(c), "expected re_phi<m>, im_phi<m>");
    }
    indices.push_back(static_cast<int>(parse_double(re.substr(6), "/columns/" + std::to_string(c))));
  }
  for (const auto& row : doc.rows) {
    times.push_back(row[0]);
    for (std::size_t k = 0; k < indices.size(); ++k) factors[indices[k]].emplace_back(row[1 + 2 * k], row[2 + 2 * k]);
  }
  DephasingFactors f(n, std::move(times), std::move(factors));
  if (const std::string* unit = doc.find("time_unit")) f.time_unit = *unit;
  return f;
}

DephasingFactors load_factors(const fs::path& path) { return factors_from_csv(read_file(path)); }

std::string to_csv(const DynamicalMapSeries& m, const std::string& config_hash) {
  std::string s = csv_header("dynamical_map", config_hash);
  s += "# n " + std::to_string(m.n) + "\n# cp_violation " + format_double(m.cp_violation) + "\nt";
  const int size = m.n * m.n;
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      const std::string id = std::to_string(a) + "_" + std::to_string(b);
      s += ",re_" + id + ",im_" + id;
    }
  }
  s += "\n";
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    s += format_double(m.times[i]);
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) {
        s += "," + format_double(m.maps[i](a, b).real()) + "," + format_double(m.maps[i](a, b).imag());
      }
    }
    s += "\n";
  }
  return s;
}

SpectralDensity load_spectral_table(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::pair<double, double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    const std::string where = "/rows/" + std::to_string(rows.size());
    if (cells.size() != 2) throw SchemaError(where, "expected two columns omega, J");
    if (first) {
      first = false;
      double probe = 0.0;
      const std::string c0 = trim(cells[0]);
      if (std::from_chars(c0.data(), c0.data() + c0.size(), probe).ec != std::errc()) continue;
    }
    rows.emplace_back(parse_double(cells[0], where + "/omega"), parse_double(cells[1], where + "/J"));
  }
  return SpectralDensity::tabulated(std::move(rows));
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns,
                      const std::string& kind, const std::string& config_hash) {
  require(header.size() == columns.size(), "table header and columns differ in length");
  std::string s = csv_header(kind, config_hash);
  for (std::size_t c = 0; c < header.size(); ++c) s += (c ? "," : "") + header[c];
  s += "\n";
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns) require(col.size() == rows, "table columns differ in length");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) s += (c ? "," : "") + format_double(columns[c][r]);
    s += "\n";
  }
  return s;
}

}  // namespace cher::io
