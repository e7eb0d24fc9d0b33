#include "influence/io.hpp"

#include "influence/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace influence::io {

using nlohmann::json;

GraphPtr parse_graph_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("graph file is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw InputError("graph file must hold a JSON object");
        const std::string name = j.value("name", std::string{});
        const json vertices = j.value("vertices", json::array());
        const json edges = j.value("edges", json::array());
        if (!vertices.is_array() || !edges.is_array()) throw InputError("'vertices' and 'edges' must be arrays");
        std::vector<Color> colors;
        std::vector<std::string> labels;
        std::unordered_map<long long, int> index;
        for (const json& v : vertices) {
            const long long id = v.at("id").get<long long>();
            const std::string c = v.at("color").get<std::string>();
            if (c != "B" && c != "W") throw InputError("vertex " + std::to_string(id) + " has color '" + c + "'");
            if (!index.emplace(id, static_cast<int>(colors.size())).second)
                throw InputError("duplicate vertex id " + std::to_string(id));
            colors.push_back(c == "B" ? Color::Black : Color::White);
            labels.push_back(v.contains("label") ? v.at("label").get<std::string>() : std::to_string(id));
        }
        std::vector<std::pair<int, int>> pairs;
        for (const json& e : edges) {
            if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a pair of vertex ids");
            const long long a = e[0].get<long long>(), b = e[1].get<long long>();
            auto ia = index.find(a), ib = index.find(b);
            if (ia == index.end() || ib == index.end())
                throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") names an unknown vertex");
            pairs.emplace_back(ia->second, ib->second);
        }
        return make_graph(std::move(colors), pairs, name, std::move(labels));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed graph file: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GraphPtr load_graph_file(const std::filesystem::path& path) { return parse_graph_json(read_text_file(path)); }

std::string graph_json(const GroundGraph& g) {
    json j;
    j["name"] = g.name();
    json vs = json::array();
    for (int v = 0; v < g.size(); ++v) {
        json o = {{"id", v}, {"color", std::string(1, color_char(g.color(v)))}};
        if (!g.labels().empty()) o["label"] = g.label(v);
        vs.push_back(std::move(o));
    }
    j["vertices"] = std::move(vs);
    json es = json::array();
    for (auto [a, b] : g.edges()) es.push_back({a, b});
    j["edges"] = std::move(es);
    return j.dump();
}

} // namespace influence::io
