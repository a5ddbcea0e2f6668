#include "mdnet/json_io.hpp"

#include <fstream>
#include <sstream>

#include "mdnet/error.hpp"
#include "mdnet/rational.hpp"

namespace mdnet {

namespace {

const Json& field(const Json& j, const char* name)
{
    if (!j.is_object())
        throw ParseError(std::string("expected an object holding '") + name + "'");
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

const Json& array_field(const Json& j, const char* name)
{
    const Json& v = field(j, name);
    if (!v.is_array())
        throw ParseError(std::string("field '") + name + "' must be an array");
    return v;
}

std::vector<double> numbers(const Json& arr, const char* what)
{
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number())
            throw ParseError(std::string(what) + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<VariableSpec> specs(const Json& arr, const char* what)
{
    std::vector<VariableSpec> out;
    for (const auto& v : arr) {
        const Json& name = field(v, "name");
        const Json& card = field(v, "cardinality");
        if (!name.is_string() || !card.is_number_integer())
            throw ParseError(std::string(what) + " entries need a string name and an integer cardinality");
        out.push_back({name.get<std::string>(), card.get<int>()});
    }
    return out;
}

Json specs_json(const std::vector<VariableSpec>& vars)
{
    Json arr = Json::array();
    for (const auto& v : vars)
        arr.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
    return arr;
}

std::vector<std::size_t> indices(const Json& arr)
{
    if (!arr.is_array())
        throw ParseError("party entries must be arrays of positions");
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ParseError("party positions must be nonnegative integers");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

} // namespace

Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

Distribution distribution_from_json(const Json& j)
{
    auto vars = specs(array_field(j, "variables"), "variables");
    auto table = numbers(array_field(j, "probabilities"), "probabilities");
    return Distribution(std::move(vars), std::move(table));
}

Json to_json(const Distribution& d)
{
    Json j;
    j["variables"] = specs_json(d.variables());
    j["probabilities"] = std::vector<double>(d.table().begin(), d.table().end());
    return j;
}

Dag dag_from_json(const Json& j)
{
    std::vector<DagNode> nodes;
    for (const auto& n : array_field(j, "nodes")) {
        const Json& name = field(n, "name");
        if (!name.is_string())
            throw ParseError("node names must be strings");
        bool latent = false;
        if (auto it = n.find("latent"); it != n.end()) {
            if (!it->is_boolean())
                throw ParseError("'latent' must be a boolean");
            latent = it->get<bool>();
        }
        nodes.push_back({name.get<std::string>(), latent});
    }
    std::vector<DagEdge> edges;
    for (const auto& e : array_field(j, "edges")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw ParseError("edges must be [from, to] name pairs");
        edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return Dag(std::move(nodes), std::move(edges));
}

Json to_json(const Dag& dag)
{
    Json j;
    Json nodes = Json::array();
    for (const auto& n : dag.nodes())
        nodes.push_back({{"name", n.name}, {"latent", n.latent}});
    Json edges = Json::array();
    for (const auto& [a, b] : dag.edges())
        edges.push_back(Json::array({a, b}));
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    return j;
}

Behavior behavior_from_json(const Json& j)
{
    auto ins = specs(array_field(j, "inputs"), "inputs");
    auto outs = specs(array_field(j, "outputs"), "outputs");
    auto table = numbers(array_field(j, "table"), "table");
    std::optional<std::vector<double>> input_dist;
    if (auto it = j.find("input_distribution"); it != j.end() && !it->is_null()) {
        if (!it->is_array())
            throw ParseError("'input_distribution' must be an array");
        input_dist = numbers(*it, "input_distribution");
    }
    std::vector<Party> parties;
    if (auto it = j.find("parties"); it != j.end() && !it->is_null()) {
        if (!it->is_array())
            throw ParseError("'parties' must be an array");
        for (const auto& p : *it)
            parties.push_back({indices(field(p, "inputs")), indices(field(p, "outputs"))});
    }
    return Behavior(std::move(ins), std::move(outs), std::move(table), std::move(input_dist), std::move(parties));
}

Json to_json(const Behavior& b)
{
    Json j;
    j["inputs"] = specs_json(b.inputs());
    j["outputs"] = specs_json(b.outputs());
    j["table"] = std::vector<double>(b.table().begin(), b.table().end());
    if (b.input_distribution())
        j["input_distribution"] = *b.input_distribution();
    Json parties = Json::array();
    for (const auto& p : b.parties())
        parties.push_back({{"inputs", p.inputs}, {"outputs", p.outputs}});
    j["parties"] = std::move(parties);
    return j;
}

Cone cone_from_json(const Json& j, const EntropySpace& space)
{
    if (!j.is_array())
        throw ParseError("a cone is an array of constraints");
    Cone cone(space);
    for (const auto& c : j) {
        const Json& coeffs = field(c, "coeffs");
        const Json& rel = field(c, "rel");
        const Json& rhs = field(c, "rhs");
        if (!coeffs.is_object() || !rel.is_string() || !rhs.is_string())
            throw ParseError("constraint needs an object 'coeffs' and string 'rel' and 'rhs'");
        LinForm f(space.dim());
        for (const auto& [key, value] : coeffs.items()) {
            if (!value.is_string())
                throw ParseError("coefficients are rational strings");
            f.add_term(space.coordinate_from_key(key), parse_rational(value.get<std::string>()));
        }
        f.constant = -parse_rational(rhs.get<std::string>());
        const std::string r = rel.get<std::string>();
        if (r == ">=")
            cone.add_inequality(f);
        else if (r == "<=")
            cone.add_inequality(-f);
        else if (r == "=" || r == "==")
            cone.add_equality(f);
        else
            throw ParseError("unknown relation '" + r + "'");
    }
    return cone;
}

Json to_json(const Cone& cone)
{
    Json arr = Json::array();
    auto emit = [&](const LinForm& f, const char* rel) {
        Json coeffs = Json::object();
        for (std::size_t i = 0; i < f.dim(); ++i)
            if (f.coeffs[i] != 0)
                coeffs[cone.space().key(i)] = to_fraction_string(f.coeffs[i]);
        arr.push_back({{"coeffs", std::move(coeffs)}, {"rel", rel}, {"rhs", to_fraction_string(-f.constant)}});
    };
    for (const auto& f : cone.inequalities())
        emit(f, ">=");
    for (const auto& f : cone.equalities())
        emit(f, "=");
    return arr;
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

} // namespace mdnet
