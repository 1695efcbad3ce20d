#pragma once
// Graph-construction counts over ranges of characters and ToM orders.

#include "enigmatom/scene_graph.hpp"

#include <string>
#include <vector>

namespace enigmatom {

struct ComplexityRow {
    int m = 0;
    int k = 0;
    GraphCounts counts;
};

struct IntRange {
    int lo = 1;
    int hi = 1;
};

// Every (m, k) pair in the ranges; a row with k > m is an error.
std::vector<ComplexityRow> complexity_report(IntRange m, IntRange k);

std::string complexity_table(const std::vector<ComplexityRow>& rows);
// m,k,enigma,symbolic_tom
std::string complexity_csv(const std::vector<ComplexityRow>& rows);

}  // namespace enigmatom
