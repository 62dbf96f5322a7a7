#pragma once

// Command-line front end: trajectory / eigen / constants subcommands.
// The entry point is a plain function over an argument vector so that the
// tool and the tests drive the same code.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "painleve/asymptotics.hpp"

namespace painleve::cli {

enum ExitCode : int { Success = 0, Failure = 1, PartialTable = 2 };

/// args excludes the program name: {"eigen", "--eq", "p1", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Table JSON as written by `eigen`.
nlohmann::json table_to_json(const Equation& eq, const SearchMode& mode, const EigenTable& table);

struct ParsedTable {
    EquationKind equation;
    SearchKind mode;
    std::vector<EigenvalueRecord> records;
};

/// Validates the table schema; throws Error(SchemaError) on malformed input.
ParsedTable table_from_json(const nlohmann::json& doc);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

}  // namespace painleve::cli
