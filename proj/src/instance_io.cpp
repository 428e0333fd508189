#include "multibid/instance_io.hpp"

#include "multibid/errors.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace multibid {

using nlohmann::json;

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object())
        throw ConfigError(where + ": expected a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

double number_at(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key) || !obj.at(key).is_number())
        throw ConfigError(where + ": missing numeric '" + key + "'");
    return obj.at(key).get<double>();
}

std::vector<double> numbers_at(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key) || !obj.at(key).is_array())
        throw ConfigError(where + ": missing array '" + key + "'");
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_number())
            throw ConfigError(where + ": non-numeric entry in '" + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

Distribution distribution_from_json(const json& doc, const std::string& where)
{
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
        throw ConfigError(where + ": distribution needs a string 'type'");
    const auto type = doc.at("type").get<std::string>();
    if (type == "discrete") {
        require_keys(doc, {"type", "support", "probs"}, where);
        return Discrete{numbers_at(doc, "support", where), numbers_at(doc, "probs", where)};
    }
    if (type == "uniform") {
        require_keys(doc, {"type", "lo", "hi"}, where);
        return Uniform{number_at(doc, "lo", where), number_at(doc, "hi", where)};
    }
    if (type == "beta") {
        require_keys(doc, {"type", "alpha", "beta"}, where);
        return Beta{number_at(doc, "alpha", where), number_at(doc, "beta", where)};
    }
    if (type == "point") {
        require_keys(doc, {"type", "value"}, where);
        return PointMass{number_at(doc, "value", where)};
    }
    throw ConfigError(where + ": unknown distribution type '" + type + "'");
}

json distribution_to_json(const Distribution& dist)
{
    if (const auto* d = std::get_if<Discrete>(&dist))
        return {{"type", "discrete"}, {"support", d->support}, {"probs", d->probs}};
    if (const auto* u = std::get_if<Uniform>(&dist))
        return {{"type", "uniform"}, {"lo", u->lo}, {"hi", u->hi}};
    if (const auto* b = std::get_if<Beta>(&dist))
        return {{"type", "beta"}, {"alpha", b->alpha}, {"beta", b->beta}};
    return {{"type", "point"}, {"value", std::get<PointMass>(dist).value}};
}

Instance instance_from_json(const json& doc)
{
    require_keys(doc, {"m", "budget", "horizon", "p0", "v0", "platforms"}, "instance");
    if (!doc.contains("m") || !doc.at("m").is_number_integer())
        throw ConfigError("instance: missing integer 'm'");
    if (!doc.contains("horizon") || !doc.at("horizon").is_number_integer())
        throw ConfigError("instance: missing integer 'horizon'");
    if (!doc.contains("platforms") || !doc.at("platforms").is_array())
        throw ConfigError("instance: missing array 'platforms'");

    Instance out;
    out.budget = number_at(doc, "budget", "instance");
    out.horizon = doc.at("horizon").get<std::int64_t>();
    if (doc.contains("p0") && !doc.at("p0").is_null())
        out.p0 = number_at(doc, "p0", "instance");
    if (doc.contains("v0") && !doc.at("v0").is_null())
        out.v0 = number_at(doc, "v0", "instance");

    const auto& platforms = doc.at("platforms");
    for (std::size_t i = 0; i < platforms.size(); ++i) {
        const std::string where = "platform " + std::to_string(i);
        require_keys(platforms[i], {"price", "value"}, where);
        if (!platforms[i].contains("price") || !platforms[i].contains("value"))
            throw ConfigError(where + ": needs both 'price' and 'value'");
        out.platforms.push_back({distribution_from_json(platforms[i].at("price"), where + " price"),
                                 distribution_from_json(platforms[i].at("value"), where + " value")});
    }
    const auto m = doc.at("m").get<std::int64_t>();
    if (m != static_cast<std::int64_t>(out.platforms.size()))
        throw ConfigError("instance: 'm' = " + std::to_string(m) + " but " +
                          std::to_string(out.platforms.size()) + " platforms listed");
    return out;
}

json instance_to_json(const Instance& instance)
{
    json platforms = json::array();
    for (const auto& p : instance.platforms)
        platforms.push_back({{"price", distribution_to_json(p.price)}, {"value", distribution_to_json(p.value)}});
    json doc = {{"m", instance.m()},
                {"budget", instance.budget},
                {"horizon", instance.horizon},
                {"platforms", std::move(platforms)}};
    if (instance.p0)
        doc["p0"] = *instance.p0;
    if (instance.v0)
        doc["v0"] = *instance.v0;
    return doc;
}

Instance load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open instance file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("instance file " + path.string() + " is not valid JSON: " + e.what());
    }
    return validate_instance(instance_from_json(doc));
}

void save_instance(const Instance& instance, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << instance_to_json(instance).dump(2) << '\n';
}

} // namespace multibid
