#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eqqcsp/formula.hpp"
#include "eqqcsp/relation.hpp"

namespace eqqcsp {

/// Parses the QECNF text format:
///
///   # comment
///   qecnf <nvars>
///   name <v> <string>
///   forall v1 v2 ...
///   exists v3 ...
///   c 1=2 1!=3
///
/// Atoms x=x are dropped as true, x!=x as false; a clause holding both
/// polarities of one atom is dropped and reported through `warnings`.
/// Throws ParseError with line and column on malformed input.
QEFormula parse_qecnf(std::string_view text,
                      std::vector<std::string>* warnings = nullptr);

/// Inverse of parse_qecnf: parse_qecnf(print_qecnf(f)) == f.
std::string print_qecnf(const QEFormula& f);

/// Clause line in QECNF syntax: "c 1=2 3!=4".
std::string clause_line(const Clause& c);

/// A relation file either lists kernels ("p ..." lines) or defines the
/// relation by clauses over 1..arity, optionally with quantified auxiliary
/// variables above arity.
using RelationSource = std::variant<Relation, QEFormula>;

RelationSource parse_relation_file(std::string_view text,
                                   std::vector<std::string>* warnings = nullptr);

/// Resolves a RelationSource to kernels, running the solver for formulas.
Relation load_relation(const RelationSource& src);

/// "rel <arity>" followed by one "p ..." line per kernel.
std::string print_relation(const Relation& r);

}  // namespace eqqcsp
