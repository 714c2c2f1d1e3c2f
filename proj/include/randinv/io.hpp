#pragma once

#include <memory>
#include <string>

#include "randinv/dist.hpp"
#include "randinv/parametric.hpp"
#include "randinv/random_fn.hpp"

#include "json.hpp"

namespace randinv {

// Matrix CSV: first row is the codomain labels with a blank first cell; each
// following row is a domain label followed by decimal entries. UTF-8, '.'
// decimal separator, labels must not contain commas.
RandomFn read_matrix_csv(const std::string& path);
RandomFn parse_matrix_csv(const std::string& text);
std::string matrix_to_csv(const RandomFn& fn);
void write_matrix_csv(const RandomFn& fn, const std::string& path);

nlohmann::ordered_json dist_to_json(const Dist& d);
Dist dist_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json matrix_to_json(const RandomFn& fn);

// Family descriptors:
//   {"type":"grid","codomain":[...],"classes":[{"label":..,"dists":[[..],..]},..]}
//   {"type":"linear31","n":..,"delta":..}
//   {"type":"trig32"}
//   {"type":"cfn","f":..,"g":..,"grid_points":..}   (f, g optional)
std::unique_ptr<ParamFamily> family_from_json(const nlohmann::ordered_json& j);

std::string read_text_file(const std::string& path);

}  // namespace randinv
