#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mdnet/bell_functionals.hpp"
#include "mdnet/probtab.hpp"

namespace mdnet {

inline constexpr double kVerdictTolerance = 1e-9;

/// sqrt(I / log2 e): the largest L1 measure compatible with mutual information I.
double pinsker_mi_to_l1(double mi_bits);

double chsh_l1_lower(double chsh_value);
double chsh_mi_lower(double chsh_value);
double cglmp_l1_lower(double cglmp_value);

enum class MerminMode { Uniform8, Odd4 };

MerminMode parse_mermin_mode(const std::string& name);
std::string to_string(MerminMode mode);

double mermin_mi_lower(double mermin_value, MerminMode mode);

struct ThetaResult {
    double value = 0.0;
    int argmin = 1; // 1, 2 or 3; ties go to the lower label
    std::array<double, 3> expressions{};
};

/// min of the three Lemma-1 expressions. `r` may name several variables,
/// which then act as one composite variable.
ThetaResult theta(const Distribution& dist, const std::string& x = "X", const std::string& y = "Y",
                  const VarSet& r = {"R"});

/// H(inputs | R).
double h_inputs_given_r(const Distribution& dist, const VarSet& inputs, const VarSet& r = {"R"});

enum class Verdict { ClassicalExplainable, Nonclassical, Inconclusive };

std::string to_string(Verdict v);

struct MdReport {
    double lower_bound_bits = 0.0; // named for the spec; holds L1 values for the L1 comparisons
    double upper_bound_bits = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::pair<std::string, double>> components;
};

Verdict decide(double lower, double upper, double tol = kVerdictTolerance);

MdReport check_chsh_mi(const Behavior& behavior, const Distribution& md_dist, const std::string& x = "X",
                       const std::string& y = "Y", const VarSet& r = {"R"});
MdReport check_chsh_l1(const Behavior& behavior, const Distribution& md_dist, const std::string& x = "X",
                       const std::string& y = "Y", const VarSet& r = {"R"});
MdReport check_cglmp(const Behavior& behavior, int d, const Distribution& md_dist, const std::string& x = "X",
                     const std::string& y = "Y", const VarSet& r = {"R"});

enum class LowerFormula { ChshMi, ChshL1, CglmpL1, MerminUniform8, MerminOdd4 };

LowerFormula parse_lower_formula(const std::string& name);
std::string to_string(LowerFormula f);
double evaluate_lower(LowerFormula f, double bell_value);
/// Formulas bounding the mutual information are compared in bits; L1 ones through Pinsker.
bool is_mi_formula(LowerFormula f);

MdReport check_generic(double bell_value, LowerFormula f, const Distribution& md_dist, const VarSet& inputs,
                       const VarSet& r = {"R"});

struct Fig7Row {
    double ratio = 0.0;
    double chsh_mi = 0.0;
    double mermin_mi = 0.0;
};

/// ratio from 0 to 1 - 1/sqrt(2) (CHSH = 2 + 2 sqrt(2) ratio, M = 2 + 4 ratio).
std::vector<Fig7Row> figure7_curves(int resolution);
double figure7_max_ratio();
std::string figure7_csv(const std::vector<Fig7Row>& rows);

} // namespace mdnet
