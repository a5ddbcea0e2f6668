#pragma once

// Causal structures, the conditional independences they imply, the scenario
// builders for the network figures, and composite-variable recoding.
//
// Scenario node names:
//   bell()                     Lambda*, X, Y, A, B
//   bell_md()                  Ux*, Uy*, Lambda*, X, Y, A, B
//   bell_md_aux()              Ux*, Uy*, Lambda*, X, Y, R
//   multipartite_bell_md_aux   U1*..Un*, Lambda*, X1..Xn, R
//   triangle()                 Ux*, Uy*, Lambda*, alpha, beta, R
//   twos_and_n(n)              U1*..Un*, Lambda*, alpha1..alphan, R
//   cyclic(n)                  U1*, U2*, Lambda1*..Lambda{n-2}*, alpha1..alpha{n-1}, R
//   nlocality_chain(n)         Lambda1*..Lambdan*, X1, X{n+1}, A1..A{n+1}
//   nlocality_md_aux(n)        U1*, U2*, Lambda1*..Lambdan*, X1, X{n+1}, A1..A{n+1}, R
// (* = latent)

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mdnet/cone.hpp"
#include "mdnet/probtab.hpp"

namespace mdnet {

struct DagNode {
    std::string name;
    bool latent = false;

    bool operator==(const DagNode&) const = default;
};

using DagEdge = std::pair<std::string, std::string>;

class Dag {
public:
    static constexpr int kMaxScenarioN = 8;

    Dag() = default;
    /// Validates unique names, known endpoints, no self loops and acyclicity.
    Dag(std::vector<DagNode> nodes, std::vector<DagEdge> edges);

    const std::vector<DagNode>& nodes() const { return nodes_; }
    const std::vector<DagEdge>& edges() const { return edges_; }
    std::size_t size() const { return nodes_.size(); }
    VarSet names() const;
    VarSet observed() const;
    VarSet latent() const;

    bool has(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;
    bool is_latent(const std::string& name) const { return nodes_[index_of(name)].latent; }

    /// All sorted by node order.
    VarSet parents(const std::string& name) const;
    VarSet children(const std::string& name) const;
    VarSet descendants(const std::string& name) const;
    VarSet nondescendants(const std::string& name) const;
    VarSet roots() const;
    VarSet latent_roots() const;

    /// Node indices in a topological order (ties by node order).
    std::vector<std::size_t> topological_order() const;

    bool operator==(const Dag&) const = default;

private:
    std::vector<DagNode> nodes_;
    std::vector<DagEdge> edges_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    // reach_[i][j]: j is a proper descendant of i
    std::vector<std::vector<bool>> reach_;
};

/// I(a : b | c) = 0.
struct CiStatement {
    VarSet a;
    VarSet b;
    VarSet c;

    bool operator==(const CiStatement&) const = default;
};

std::string to_string(const CiStatement& s);

/// One grouped statement I(v : ND(v)\Pa(v) | Pa(v)) = 0 per node, in node
/// order, skipping nodes whose set ND(v)\Pa(v) is empty.
std::vector<CiStatement> local_markov_constraints(const Dag& dag);

/// H(roots) - sum H(root) over the latent roots. Needs at least two.
LinForm source_independence_constraint(const Dag& dag, const EntropySpace& space);
LinForm source_independence_constraint(const Dag& dag);

LinForm ci_equality(const EntropySpace& space, const CiStatement& s);

namespace scenario {
Dag bell();
Dag bell_md();
Dag bell_md_aux();
Dag multipartite_bell_md_aux(int n);
Dag triangle();
Dag twos_and_n(int n);
Dag cyclic(int n);
Dag nlocality_chain(int n);
Dag nlocality_md_aux(int n);

/// Looks up a builder by name ("bell", "triangle", "cyclic", ...).
Dag by_name(const std::string& name, int n = 0);
std::vector<std::string> names();
} // namespace scenario

/// Structure-preserving bijection of nodes (latent flags must agree).
bool isomorphic(const Dag& a, const Dag& b);

struct MergeGroup {
    std::string name;
    VarSet members;
};

/// Replaces each group by one variable whose value is the mixed-radix code of
/// its members (first member most significant). The new variable sits at the
/// position of the group's first member in the original order.
Distribution merge_variables(const Distribution& dist, const std::vector<MergeGroup>& groups);

/// Inverse of merge_variables for one variable: replaced in place by `members`.
Distribution split_variable(const Distribution& dist, const std::string& name,
                            const std::vector<VariableSpec>& members);

} // namespace mdnet
