#ifndef QPAN_TOOLS_RUN_HPP
#define QPAN_TOOLS_RUN_HPP

#include <string>

namespace qpan::cli {

/**
 * @brief Execute one batch run described by a JSON configuration file.
 *
 * Parses and schema-validates the file (unknown keys anywhere are
 * rejected), dispatches to the library, writes one artifact file, and
 * prints a one-line JSON status to stdout. Identical configuration files
 * produce byte-identical artifacts and status lines.
 *
 * Failures propagate as the library exception types; the binary maps them
 * to exit codes (validation 2, numerical failure 3, formal refusal 4).
 *
 * @param config_path path of the configuration file
 * @param output_override artifact path replacing the config's choice;
 *        empty keeps the config's own (or the command default)
 */
void run(const std::string& config_path, const std::string& output_override);

} // namespace qpan::cli

#endif // QPAN_TOOLS_RUN_HPP
