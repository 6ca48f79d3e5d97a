#pragma once

#include <string>

#include <json.hpp>

#include "sn/fusion.hpp"

namespace sn {

struct CategoryFile {
  FusionData data;
  nlohmann::json algebras = nlohmann::json::array();
  nlohmann::json bimodules = nlohmann::json::array();
};

Scalar parse_scalar(const nlohmann::json& j);
nlohmann::json scalar_json(Scalar s);

CategoryFile parse_category(const nlohmann::json& j);
CategoryFile load_category(const std::string& path);
nlohmann::json category_json(const CategoryFile& f);

nlohmann::json load_json(const std::string& path);

}  // namespace sn
