#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qpan/errors.hpp"
#include "run.hpp"

namespace {

constexpr const char* kUsageNotes = R"(configuration file (strict JSON; unknown keys are rejected):
  {
    "command":   one of solve, laurent, continue, residual, expoly-check,
                 pole-orbit, nevanlinna, classify
    "params":    {"A": [re, im], "B": [..], "C": [..], "D": [..], "q": [..]}
    "options":   command-specific object, see below
    "output":    artifact path (optional; -o overrides)
    "precision": "double" (default) or "extended"
  }
  Every complex value is a [re, im] pair. "extended" runs the whole
  computation on the long double backend.

command options and artifact columns (fixed order, 17 significant digits):
  solve         a0 | a0_list | forced, N      CSV n,re,im
                                              (a0_list prepends a member column)
  laurent       z0 with b0 (optional), N      CSV n,re,im starting at n = -1;
                                              trailing exact-zero rows trimmed
  continue      a0, at, mode (value|jet|step),
                k, depth, N, micro_steps,
                known_poles                   JSON: value or jet per mode
  residual      source (entire|laurent-origin
                |laurent-at), a0 | z0 + b0,
                N, radius, samples            CSV i,re_z,im_z,abs_residual
  expoly-check  terms                         JSON: candidate, residual,
                                              solves, witness
  pole-orbit    degrees, kind, t, z0, steps   CSV n,re_point,im_point,order
  nevanlinna    mode (curve|q-shift|
                first-main|mokhonko), f,
                radii | grid, nodes, a, outer curve: CSV r,m,N,T; other modes:
                                              one JSON verdict object
  classify      kind, f_divides_p, n_small,
                rational_coeffs, f0_zero,
                degrees                       JSON: one object per fired clause

Each run writes one artifact file and one JSON status line on stdout.
Identical configuration files produce byte-identical outputs.

exit codes:
  0  success
  2  validation error (unreadable or schema-invalid config, bad option values)
  3  numerical failure (overflow, unreliable quadrature, pole proximity)
  4  refusal to evaluate or continue a formal expansion)";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch runner for pantograph-Riccati series, orbits, and verdicts"};
    std::string config_path;
    std::string output_override;
    app.add_option("config", config_path, "JSON run configuration file")
        ->required();
    app.add_option("-o,--output", output_override,
                   "artifact path overriding the config");
    app.footer(kUsageNotes);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        qpan::cli::run(config_path, output_override);
        return 0;
    } catch (const qpan::formal_series_error& e) {
        std::cerr << "formal refusal: " << e.what() << "\n";
        return 4;
    } catch (const qpan::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const qpan::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
