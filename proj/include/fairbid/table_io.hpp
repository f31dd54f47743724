#pragma once

#include <iosfwd>
#include <string>

#include "fairbid/ratio_solver.hpp"

namespace fairbid {

/// Versioned flat-file table format: a small key,value header followed by one
/// CSV row per state. Doubles are written in shortest round-trip form, so a
/// save/load cycle reproduces values exactly.
void save_table(const ParityValueTable& table, std::ostream& out);
void save_table(const RatioValueTable& table, std::ostream& out);

ParityValueTable load_parity_table(std::istream& in);
RatioValueTable load_ratio_table(std::istream& in);

/// "parity" or "ratio" from the file header, without consuming the stream
/// position permanently (seeks back to the start).
std::string peek_table_kind(std::istream& in);

void save_table_file(const ParityValueTable& table, const std::string& path);
void save_table_file(const RatioValueTable& table, const std::string& path);
ParityValueTable load_parity_table_file(const std::string& path);
RatioValueTable load_ratio_table_file(const std::string& path);
std::string table_kind_of_file(const std::string& path);

}  // namespace fairbid
