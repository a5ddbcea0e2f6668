#include "mdnet/causal_graphs.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <numeric>
#include <set>

#include "mdnet/error.hpp"

namespace mdnet {

Dag::Dag(std::vector<DagNode> nodes, std::vector<DagEdge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges))
{
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name.empty())
            throw ArgumentError("empty node name");
        if (!idx.emplace(nodes_[i].name, i).second)
            throw ArgumentError("duplicate node '" + nodes_[i].name + "'");
    }
    const std::size_t n = nodes_.size();
    parents_.assign(n, {});
    children_.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [from, to] : edges_) {
        auto f = idx.find(from);
        auto t = idx.find(to);
        if (f == idx.end())
            throw NameError("edge from unknown node '" + from + "'");
        if (t == idx.end())
            throw NameError("edge to unknown node '" + to + "'");
        if (f->second == t->second)
            throw ArgumentError("self loop on '" + from + "'");
        if (!seen.emplace(f->second, t->second).second)
            continue;
        parents_[t->second].push_back(f->second);
        children_[f->second].push_back(t->second);
    }
    for (auto& p : parents_)
        std::sort(p.begin(), p.end());
    for (auto& c : children_)
        std::sort(c.begin(), c.end());

    reach_.assign(n, std::vector<bool>(n, false));
    const auto order = topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (std::size_t c : children_[*it]) {
            reach_[*it][c] = true;
            for (std::size_t j = 0; j < n; ++j)
                if (reach_[c][j])
                    reach_[*it][j] = true;
        }
    }
}

std::vector<std::size_t> Dag::topological_order() const
{
    const std::size_t n = nodes_.size();
    std::vector<std::size_t> indeg(n);
    for (std::size_t i = 0; i < n; ++i)
        indeg[i] = parents_[i].size();
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0)
            ready.insert(i);
    std::vector<std::size_t> out;
    while (!ready.empty()) {
        std::size_t v = *ready.begin();
        ready.erase(ready.begin());
        out.push_back(v);
        for (std::size_t c : children_[v])
            if (--indeg[c] == 0)
                ready.insert(c);
    }
    if (out.size() != n)
        throw ArgumentError("graph has a directed cycle");
    return out;
}

VarSet Dag::names() const
{
    VarSet out;
    for (const auto& nd : nodes_)
        out.push_back(nd.name);
    return out;
}

VarSet Dag::observed() const
{
    VarSet out;
    for (const auto& nd : nodes_)
        if (!nd.latent)
            out.push_back(nd.name);
    return out;
}

VarSet Dag::latent() const
{
    VarSet out;
    for (const auto& nd : nodes_)
        if (nd.latent)
            out.push_back(nd.name);
    return out;
}

bool Dag::has(const std::string& name) const
{
    return std::any_of(nodes_.begin(), nodes_.end(), [&](const DagNode& n) { return n.name == name; });
}

std::size_t Dag::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].name == name)
            return i;
    throw NameError("unknown node '" + name + "'");
}

VarSet Dag::parents(const std::string& name) const
{
    VarSet out;
    for (std::size_t p : parents_[index_of(name)])
        out.push_back(nodes_[p].name);
    return out;
}

VarSet Dag::children(const std::string& name) const
{
    VarSet out;
    for (std::size_t c : children_[index_of(name)])
        out.push_back(nodes_[c].name);
    return out;
}

VarSet Dag::descendants(const std::string& name) const
{
    const auto i = index_of(name);
    VarSet out;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        if (reach_[i][j])
            out.push_back(nodes_[j].name);
    return out;
}

VarSet Dag::nondescendants(const std::string& name) const
{
    const auto i = index_of(name);
    VarSet out;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        if (j != i && !reach_[i][j])
            out.push_back(nodes_[j].name);
    return out;
}

VarSet Dag::roots() const
{
    VarSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (parents_[i].empty())
            out.push_back(nodes_[i].name);
    return out;
}

VarSet Dag::latent_roots() const
{
    VarSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (parents_[i].empty() && nodes_[i].latent)
            out.push_back(nodes_[i].name);
    return out;
}

std::string to_string(const CiStatement& s)
{
    auto join = [](const VarSet& v) {
        std::string out;
        for (const auto& x : v) {
            if (!out.empty())
                out += ",";
            out += x;
        }
        return out;
    };
    std::string out = "I(" + join(s.a) + " : " + join(s.b);
    if (!s.c.empty())
        out += " | " + join(s.c);
    return out + ") = 0";
}

std::vector<CiStatement> local_markov_constraints(const Dag& dag)
{
    std::vector<CiStatement> out;
    for (const auto& node : dag.nodes()) {
        const VarSet pa = dag.parents(node.name);
        VarSet rest;
        for (const auto& nd : dag.nondescendants(node.name))
            if (std::find(pa.begin(), pa.end(), nd) == pa.end())
                rest.push_back(nd);
        if (rest.empty())
            continue;
        out.push_back({{node.name}, rest, pa});
    }
    return out;
}

LinForm source_independence_constraint(const Dag& dag, const EntropySpace& space)
{
    const VarSet roots = dag.latent_roots();
    if (roots.size() < 2)
        throw ArgumentError("source independence needs at least two latent root nodes");
    LinForm f = EntropyExpr::H(space, roots);
    for (const auto& r : roots)
        f -= EntropyExpr::H(space, VarSet{r});
    return f;
}

LinForm source_independence_constraint(const Dag& dag)
{
    return source_independence_constraint(dag, EntropySpace(dag.names()));
}

LinForm ci_equality(const EntropySpace& space, const CiStatement& s)
{
    return EntropyExpr::cmi(space, s.a, s.b, s.c);
}

namespace scenario {

namespace {

void check_n(int n, int lo, const char* what)
{
    if (n < lo || n > Dag::kMaxScenarioN)
        throw CapacityError(std::string(what) + ": n must be in [" + std::to_string(lo) + ", " +
                            std::to_string(Dag::kMaxScenarioN) + "]");
}

std::string idx(const std::string& base, int i) { return base + std::to_string(i); }

} // namespace

Dag bell()
{
    return Dag({{"Lambda", true}, {"X", false}, {"Y", false}, {"A", false}, {"B", false}},
               {{"X", "A"}, {"Lambda", "A"}, {"Y", "B"}, {"Lambda", "B"}});
}

Dag bell_md()
{
    return Dag({{"Ux", true}, {"Uy", true}, {"Lambda", true}, {"X", false}, {"Y", false}, {"A", false}, {"B", false}},
               {{"Ux", "X"},
                {"Lambda", "X"},
                {"Uy", "Y"},
                {"Lambda", "Y"},
                {"X", "A"},
                {"Ux", "A"},
                {"Lambda", "A"},
                {"Y", "B"},
                {"Uy", "B"},
                {"Lambda", "B"}});
}

Dag bell_md_aux()
{
    return Dag({{"Ux", true}, {"Uy", true}, {"Lambda", true}, {"X", false}, {"Y", false}, {"R", false}},
               {{"Ux", "X"}, {"Lambda", "X"}, {"Uy", "Y"}, {"Lambda", "Y"}, {"Ux", "R"}, {"Uy", "R"}});
}

Dag multipartite_bell_md_aux(int n)
{
    check_n(n, 1, "multipartite_bell_md_aux");
    std::vector<DagNode> nodes;
    std::vector<DagEdge> edges;
    for (int i = 1; i <= n; ++i)
        nodes.push_back({idx("U", i), true});
    nodes.push_back({"Lambda", true});
    for (int i = 1; i <= n; ++i) {
        nodes.push_back({idx("X", i), false});
        edges.push_back({idx("U", i), idx("X", i)});
        edges.push_back({"Lambda", idx("X", i)});
    }
    nodes.push_back({"R", false});
    for (int i = 1; i <= n; ++i)
        edges.push_back({idx("U", i), "R"});
    return Dag(nodes, edges);
}

Dag triangle()
{
    return Dag({{"Ux", true}, {"Uy", true}, {"Lambda", true}, {"alpha", false}, {"beta", false}, {"R", false}},
               {{"Ux", "alpha"}, {"Lambda", "alpha"}, {"Uy", "beta"}, {"Lambda", "beta"}, {"Ux", "R"}, {"Uy", "R"}});
}

Dag twos_and_n(int n)
{
    check_n(n, 2, "twos_and_n");
    std::vector<DagNode> nodes;
    std::vector<DagEdge> edges;
    for (int i = 1; i <= n; ++i)
        nodes.push_back({idx("U", i), true});
    nodes.push_back({"Lambda", true});
    for (int i = 1; i <= n; ++i) {
        nodes.push_back({idx("alpha", i), false});
        edges.push_back({idx("U", i), idx("alpha", i)});
        edges.push_back({"Lambda", idx("alpha", i)});
    }
    nodes.push_back({"R", false});
    for (int i = 1; i <= n; ++i)
        edges.push_back({idx("U", i), "R"});
    return Dag(nodes, edges);
}

Dag cyclic(int n)
{
    check_n(n, 3, "cyclic");
    std::vector<DagNode> nodes{{"U1", true}, {"U2", true}};
    std::vector<DagEdge> edges;
    for (int i = 1; i <= n - 2; ++i)
        nodes.push_back({idx("Lambda", i), true});
    for (int i = 1; i <= n - 1; ++i)
        nodes.push_back({idx("alpha", i), false});
    nodes.push_back({"R", false});
    for (int i = 1; i <= n - 2; ++i) {
        edges.push_back({idx("Lambda", i), idx("alpha", i)});
        edges.push_back({idx("Lambda", i), idx("alpha", i + 1)});
    }
    edges.push_back({"U1", "alpha1"});
    edges.push_back({"U1", "R"});
    edges.push_back({"U2", idx("alpha", n - 1)});
    edges.push_back({"U2", "R"});
    return Dag(nodes, edges);
}

Dag nlocality_chain(int n)
{
    check_n(n, 1, "nlocality_chain");
    std::vector<DagNode> nodes;
    std::vector<DagEdge> edges;
    for (int i = 1; i <= n; ++i)
        nodes.push_back({idx("Lambda", i), true});
    nodes.push_back({"X1", false});
    nodes.push_back({idx("X", n + 1), false});
    for (int i = 1; i <= n + 1; ++i)
        nodes.push_back({idx("A", i), false});
    edges.push_back({"X1", "A1"});
    edges.push_back({idx("X", n + 1), idx("A", n + 1)});
    for (int i = 1; i <= n; ++i) {
        edges.push_back({idx("Lambda", i), idx("A", i)});
        edges.push_back({idx("Lambda", i), idx("A", i + 1)});
    }
    return Dag(nodes, edges);
}

Dag nlocality_md_aux(int n)
{
    check_n(n, 1, "nlocality_md_aux");
    std::vector<DagNode> nodes{{"U1", true}, {"U2", true}};
    std::vector<DagEdge> edges;
    for (int i = 1; i <= n; ++i)
        nodes.push_back({idx("Lambda", i), true});
    const std::string xl = idx("X", n + 1);
    const std::string al = idx("A", n + 1);
    const std::string ll = idx("Lambda", n);
    nodes.push_back({"X1", false});
    nodes.push_back({xl, false});
    for (int i = 1; i <= n + 1; ++i)
        nodes.push_back({idx("A", i), false});
    nodes.push_back({"R", false});
    edges.insert(edges.end(), {{"U1", "X1"}, {"Lambda1", "X1"}, {"X1", "A1"}, {"U1", "A1"}});
    edges.insert(edges.end(), {{"U2", xl}, {ll, xl}, {xl, al}, {"U2", al}});
    for (int i = 1; i <= n; ++i) {
        edges.push_back({idx("Lambda", i), idx("A", i)});
        edges.push_back({idx("Lambda", i), idx("A", i + 1)});
    }
    edges.insert(edges.end(), {{"U1", "R"}, {"U2", "R"}});
    return Dag(nodes, edges);
}

Dag by_name(const std::string& name, int n)
{
    if (name == "bell")
        return bell();
    if (name == "bell_md")
        return bell_md();
    if (name == "bell_md_aux")
        return bell_md_aux();
    if (name == "multipartite_bell_md_aux")
        return multipartite_bell_md_aux(n);
    if (name == "triangle")
        return triangle();
    if (name == "twos_and_n")
        return twos_and_n(n);
    if (name == "cyclic")
        return cyclic(n);
    if (name == "nlocality_chain")
        return nlocality_chain(n);
    if (name == "nlocality_md_aux")
        return nlocality_md_aux(n);
    throw NameError("unknown scenario '" + name + "'");
}

std::vector<std::string> names()
{
    return {"bell",     "bell_md", "bell_md_aux",     "multipartite_bell_md_aux", "triangle",
            "twos_and_n", "cyclic", "nlocality_chain", "nlocality_md_aux"};
}

} // namespace scenario

bool isomorphic(const Dag& a, const Dag& b)
{
    const std::size_t n = a.size();
    if (n != b.size() || a.edges().size() != b.edges().size())
        return false;
    auto adjacency = [](const Dag& g) {
        std::vector<std::vector<bool>> adj(g.size(), std::vector<bool>(g.size(), false));
        for (const auto& [f, t] : g.edges())
            adj[g.index_of(f)][g.index_of(t)] = true;
        return adj;
    };
    const auto adj_a = adjacency(a);
    const auto adj_b = adjacency(b);
    auto signature = [](const Dag& g, const std::vector<std::vector<bool>>& adj, std::size_t v) {
        std::size_t in = 0;
        std::size_t out = 0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            in += adj[j][v];
            out += adj[v][j];
        }
        return std::tuple(g.nodes()[v].latent, in, out);
    };

    std::vector<std::size_t> map(n);
    std::vector<bool> used(n, false);
    std::function<bool(std::size_t)> extend = [&](std::size_t i) {
        if (i == n)
            return true;
        const auto sig = signature(a, adj_a, i);
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c] || signature(b, adj_b, c) != sig)
                continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                ok = adj_a[i][j] == adj_b[c][map[j]] && adj_a[j][i] == adj_b[map[j]][c];
            if (!ok)
                continue;
            used[c] = true;
            map[i] = c;
            if (extend(i + 1))
                return true;
            used[c] = false;
        }
        return false;
    };
    return extend(0);
}

Distribution merge_variables(const Distribution& dist, const std::vector<MergeGroup>& groups)
{
    const auto& vars = dist.variables();
    const std::size_t nv = vars.size();
    // owner[i]: group index of variable i, or -1
    std::vector<int> owner(nv, -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].members.empty())
            throw ArgumentError("merge group '" + groups[g].name + "' has no members");
        for (const auto& m : groups[g].members) {
            const auto i = dist.index_of(m);
            if (owner[i] != -1)
                throw ArgumentError("variable '" + m + "' appears in more than one merge group");
            owner[i] = static_cast<int>(g);
        }
    }

    // new layout
    struct Slot {
        std::string name;
        std::vector<std::size_t> members; // original positions, most significant first
        int cardinality = 1;
    };
    std::vector<Slot> slots;
    std::vector<bool> placed(groups.size(), false);
    for (std::size_t i = 0; i < nv; ++i) {
        if (owner[i] == -1) {
            slots.push_back({vars[i].name, {i}, vars[i].cardinality});
            continue;
        }
        const auto g = static_cast<std::size_t>(owner[i]);
        if (placed[g])
            continue;
        placed[g] = true;
        Slot s{groups[g].name, {}, 1};
        for (const auto& m : groups[g].members) {
            const auto p = dist.index_of(m);
            s.members.push_back(p);
            s.cardinality *= vars[p].cardinality;
        }
        slots.push_back(std::move(s));
    }

    std::vector<VariableSpec> specs;
    for (const auto& s : slots)
        specs.push_back({s.name, s.cardinality});
    {
        std::set<std::string> names;
        for (const auto& s : specs)
            if (!names.insert(s.name).second)
                throw ArgumentError("merged variable name '" + s.name + "' clashes with another variable");
    }

    std::vector<double> table(dist.size(), 0.0);
    std::vector<int> target(slots.size());
    for (std::size_t flat = 0; flat < dist.size(); ++flat) {
        const auto a = dist.unravel(flat);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            int code = 0;
            for (std::size_t p : slots[k].members)
                code = code * vars[p].cardinality + a[p];
            target[k] = code;
        }
        std::size_t out = 0;
        for (std::size_t k = 0; k < slots.size(); ++k)
            out = out * static_cast<std::size_t>(slots[k].cardinality) + static_cast<std::size_t>(target[k]);
        table[out] = dist.table()[flat];
    }
    return Distribution(std::move(specs), std::move(table));
}

Distribution split_variable(const Distribution& dist, const std::string& name, const std::vector<VariableSpec>& members)
{
    const auto pos = dist.index_of(name);
    const auto& vars = dist.variables();
    if (members.empty())
        throw ArgumentError("split needs at least one member");
    long long product = 1;
    for (const auto& m : members) {
        if (m.cardinality < 1)
            throw ArgumentError("member cardinality must be positive");
        product *= m.cardinality;
    }
    if (product != vars[pos].cardinality)
        throw ArgumentError("member cardinalities do not multiply to the cardinality of '" + name + "'");

    std::vector<VariableSpec> specs;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i == pos)
            specs.insert(specs.end(), members.begin(), members.end());
        else
            specs.push_back(vars[i]);
    }
    // same flat layout: mixed radix with the first member most significant
    // is exactly the row-major expansion of the merged digit
    std::vector<double> table(dist.table().begin(), dist.table().end());
    return Distribution(std::move(specs), std::move(table));
}

} // namespace mdnet
