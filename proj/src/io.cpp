#include "randinv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "randinv/models.hpp"

namespace randinv {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("matrix CSV: cannot parse number '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("matrix CSV: trailing junk in number '" + s + "'");
  return v;
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RandomFn parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("matrix CSV: empty input");
  auto header = split_csv_line(strip_cr(line));
  if (header.size() < 2 || !header[0].empty()) {
    throw std::invalid_argument("matrix CSV: header must start with a blank cell");
  }
  std::vector<Label> codomain(header.begin() + 1, header.end());
  std::vector<Label> domain;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != codomain.size() + 1) {
      throw std::invalid_argument("matrix CSV: row '" + cells[0] + "' has wrong cell count");
    }
    domain.push_back(cells[0]);
    std::vector<double> row;
    row.reserve(codomain.size());
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_number(cells[i]));
    rows.push_back(std::move(row));
  }
  if (domain.empty()) throw std::invalid_argument("matrix CSV: no data rows");
  return RandomFn(std::move(domain), std::move(codomain), std::move(rows));
}

RandomFn read_matrix_csv(const std::string& path) { return parse_matrix_csv(read_text_file(path)); }

std::string matrix_to_csv(const RandomFn& fn) {
  std::ostringstream out;
  for (const auto& u : fn.codomain()) out << ',' << u;
  out << '\n';
  for (std::size_t a = 0; a < fn.domain_size(); ++a) {
    out << fn.domain()[a];
    for (std::size_t u = 0; u < fn.codomain_size(); ++u) out << ',' << format17(fn.entry(a, u));
    out << '\n';
  }
  return out.str();
}

void write_matrix_csv(const RandomFn& fn, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_csv: cannot open '" + path + "'");
  out << matrix_to_csv(fn);
  if (!out) throw std::runtime_error("write_matrix_csv: failed while writing '" + path + "'");
}

nlohmann::ordered_json dist_to_json(const Dist& d) {
  return nlohmann::ordered_json{{"labels", d.labels()}, {"probs", d.probs()}};
}

Dist dist_from_json(const nlohmann::ordered_json& j) {
  return Dist(j.at("labels").get<std::vector<std::string>>(),
              j.at("probs").get<std::vector<double>>());
}

nlohmann::ordered_json matrix_to_json(const RandomFn& fn) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < fn.domain_size(); ++a) {
    auto r = fn.row(a);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return nlohmann::ordered_json{
      {"domain", fn.domain()}, {"codomain", fn.codomain()}, {"rows", rows}};
}

std::unique_ptr<ParamFamily> family_from_json(const nlohmann::ordered_json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "grid") {
    auto codomain = j.at("codomain").get<std::vector<std::string>>();
    std::vector<std::pair<Label, std::vector<Dist>>> classes;
    for (const auto& cls : j.at("classes")) {
      std::vector<Dist> dists;
      for (const auto& probs : cls.at("dists")) {
        dists.emplace_back(codomain, probs.get<std::vector<double>>());
      }
      classes.emplace_back(cls.at("label").get<std::string>(), std::move(dists));
    }
    return std::make_unique<GridFamily>(std::move(codomain), std::move(classes));
  }
  if (type == "linear31") {
    return std::make_unique<models::LinearFamily>(j.at("n").get<int>(),
                                                  j.at("delta").get<double>());
  }
  if (type == "trig32") {
    return std::make_unique<models::TrigFamily>();
  }
  if (type == "cfn") {
    std::optional<std::pair<double, double>> fg;
    if (j.contains("f") || j.contains("g")) {
      fg = std::make_pair(j.at("f").get<double>(), j.at("g").get<double>());
    }
    const int points = j.value("grid_points", 6);
    return std::make_unique<models::CfnFamily>(fg, points);
  }
  throw std::invalid_argument("family_from_json: unknown family type '" + type + "'");
}

}  // namespace randinv
