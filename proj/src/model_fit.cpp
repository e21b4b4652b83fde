#include "hoops/model_fit.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hoops/errors.hpp"

namespace hoops {

using nlohmann::json;

const ModelFit::Group* ModelFit::find(const std::string& name) const {
    for (const auto& g : groups)
        if (g.name == name) return &g;
    return nullptr;
}

double ModelFit::value(const std::string& group, const std::string& level) const {
    const Group* g = find(group);
    if (g == nullptr) return 0.0;
    for (std::size_t i = 0; i < g->levels.size(); ++i)
        if (g->levels[i] == level) return g->values[i];
    return 0.0;
}

double ModelFit::group_mean(const std::string& group) const {
    const Group* g = find(group);
    if (g == nullptr || g->values.empty()) return 0.0;
    double s = 0.0;
    for (double v : g->values) s += v;
    return s / static_cast<double>(g->values.size());
}

std::string ModelFit::to_json() const {
    json j;
    j["fit_kind"] = fit_kind;
    j["lambda"] = lambda;
    j["n_obs"] = n_obs;
    if (fit_kind == "linear")
        j["diagnostics"] = {{"r_squared", r_squared}};
    else
        j["diagnostics"] = {{"mean_log_likelihood", mean_log_likelihood}};
    json gs = json::object();
    for (const auto& g : groups) {
        json lv = json::object();
        for (std::size_t i = 0; i < g.levels.size(); ++i) lv[g.levels[i]] = g.values[i];
        gs[g.name] = std::move(lv);
    }
    j["groups"] = std::move(gs);
    return j.dump(2) + "\n";
}

ModelFit ModelFit::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model fit JSON: ") + e.what());
    }
    ModelFit f;
    try {
        f.fit_kind = j.at("fit_kind").get<std::string>();
        f.lambda = j.at("lambda").get<double>();
        f.n_obs = j.at("n_obs").get<int>();
        const auto& d = j.at("diagnostics");
        if (f.fit_kind == "linear")
            f.r_squared = d.at("r_squared").get<double>();
        else
            f.mean_log_likelihood = d.at("mean_log_likelihood").get<double>();
        for (const auto& [name, lv] : j.at("groups").items()) {
            Group g;
            g.name = name;
            for (const auto& [level, v] : lv.items()) {
                g.levels.push_back(level);
                g.values.push_back(v.get<double>());
            }
            f.groups.push_back(std::move(g));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model fit JSON: ") + e.what());
    }
    return f;
}

void ModelFit::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    std::string s = to_json();
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!out) throw ParseError("write failed: " + path);
}

ModelFit ModelFit::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_json(os.str());
}

}  // namespace hoops
