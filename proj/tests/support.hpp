#pragma once

#include <array>
#include <optional>
#include <string>

#include "ssg/document.hpp"
#include "ssg/error.hpp"

namespace test {

inline std::string data_path(const std::string& name) { return std::string(SSG_DATA_DIR) + "/" + name + ".json"; }

inline ssg::ProjectDocument fixture(const std::string& name) { return ssg::load_document_file(data_path(name)); }

template <class F>
std::optional<ssg::ErrorKind> thrown(F&& f)
{
    try {
        f();
    } catch (const ssg::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline nlohmann::json graph_json(std::initializer_list<const char*> vertices,
                                 std::initializer_list<std::array<const char*, 3>> edges)
{
    nlohmann::json g;
    g["vertices"] = nlohmann::json::array();
    for (const char* v : vertices)
        g["vertices"].push_back(v);
    g["edges"] = nlohmann::json::array();
    for (const auto& e : edges)
        g["edges"].push_back({{"id", e[0]}, {"range", e[1]}, {"source", e[2]}});
    return g;
}

} // namespace test
