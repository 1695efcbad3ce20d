#include "enigmatom/complexity.hpp"

#include "enigmatom/error.hpp"

#include <cstdio>
#include <sstream>

namespace enigmatom {

std::vector<ComplexityRow> complexity_report(IntRange m, IntRange k) {
    if (m.lo > m.hi || k.lo > k.hi) throw ValidationError("empty range in complexity report");
    std::vector<ComplexityRow> rows;
    for (int mi = m.lo; mi <= m.hi; ++mi) {
        for (int ki = k.lo; ki <= k.hi; ++ki) rows.push_back({mi, ki, graph_build_counts(mi, ki)});
    }
    return rows;
}

std::string complexity_table(const std::vector<ComplexityRow>& rows) {
    std::ostringstream os;
    os << "  m   k      enigma  symbolic_tom\n";
    for (const auto& r : rows) {
        char line[96];
        std::snprintf(line, sizeof line, "%3d %3d %11llu %13llu\n", r.m, r.k,
                      static_cast<unsigned long long>(r.counts.enigma),
                      static_cast<unsigned long long>(r.counts.symbolic_tom));
        os << line;
    }
    return os.str();
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
    std::ostringstream os;
    os << "m,k,enigma,symbolic_tom\n";
    for (const auto& r : rows) os << r.m << ',' << r.k << ',' << r.counts.enigma << ',' << r.counts.symbolic_tom << '\n';
    return os.str();
}

}  // namespace enigmatom
