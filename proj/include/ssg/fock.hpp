#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssg/kms.hpp"

namespace ssg {

// 0/1 operator sending basis vector i to image[i], or to zero when
// image[i] = -1.
struct PartialMap {
    std::vector<int> image;

    static PartialMap identity(std::size_t n);
    std::size_t dimension() const noexcept { return image.size(); }
    bool is_injective() const;
    // throws unless injective
    PartialMap adjoint() const;
    friend PartialMap operator*(const PartialMap& a, const PartialMap& b);
    friend bool operator==(const PartialMap&, const PartialMap&) = default;
};

struct FockRep {
    unsigned depth = 0;
    std::vector<Path> basis;  // shortest first
    std::map<Path, int> index;
    std::vector<PartialMap> p;  // per vertex
    std::vector<PartialMap> s;  // per edge
    std::vector<MachineState> states;
    std::vector<PartialMap> u;  // per requested state

    int level(int i) const { return static_cast<int>(basis[static_cast<std::size_t>(i)].length()); }
};

FockRep build_fock(const Groupoid& groupoid, unsigned depth, const std::vector<MachineState>& states);
PartialMap fock_unitary(const Groupoid& groupoid, const FockRep& rep, const MachineState& g);

struct RelationCheck {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string first_failure;
    bool passed() const noexcept { return failures == 0; }
};

struct RelationReport {
    std::vector<RelationCheck> checks;
    bool all_passed() const;
};

RelationReport check_relations(const Groupoid& groupoid, const FockRep& rep);

struct BruteForceValue {
    Complex value = 0.0;
    double tail_bound = 0;
    unsigned depth = 0;
};

// psi_{beta,tau} by summing over the path tree to depth L, with the bound
// on what the levels beyond L can contribute.
BruteForceValue psi_bruteforce(const Groupoid& groupoid, double beta, const GroupoidTrace& tau,
                               const SpanningElement& b, unsigned depth);

} // namespace ssg
