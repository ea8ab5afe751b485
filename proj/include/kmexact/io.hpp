#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "kmexact/fl_solver.hpp"
#include "kmexact/metric.hpp"
#include "kmexact/reductions.hpp"

namespace kmexact {

// File formats (UTF-8, whitespace separated, full-line '#' comments):
//   KMED 1      : "n k" or "n k ASYM", then n rows of n integers
//   KMEDFL 1    : "n m k", then n rows of m integers (client x facility)
//   GRAPH 1     : "n m", then m lines "u v" (0-indexed)
//   SETCOVER 1  : "n m k", then m lines "size e1 ... e_size"

struct KmedProblem {
    MetricInstance instance;
    int k;
};

using ParsedInput = std::variant<KmedProblem, FLInstance, SimpleGraph, SetSystem>;

// Parses by magic line; all errors carry line/column positions.
ParsedInput parse_instance(std::istream& in, const std::string& source_name);
ParsedInput parse_instance_file(const std::string& path);

void write_kmed(std::ostream& out, const MetricInstance& inst, int k);
void write_kmedfl(std::ostream& out, const FLInstance& inst);
void write_graph(std::ostream& out, const SimpleGraph& g);
void write_setcover(std::ostream& out, const SetSystem& s);

std::string format_name(const ParsedInput& input);

}  // namespace kmexact
