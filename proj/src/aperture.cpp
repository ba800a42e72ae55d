#include "msta/aperture.hpp"

#include <string>

#include "msta/errors.hpp"

namespace msta {

void validate(const aperture_spec& spec) {
    if (spec.M < 1 || spec.N < 1)
        fail(errc::invalid_instance, "aperture must have at least one row and column");
    if (spec.S < 1)
        fail(errc::invalid_instance, "small tile side must be >= 1");
    if (spec.L <= spec.S)
        fail(errc::invalid_instance, "large tile side must exceed the small side");
    if (spec.L % spec.S != 0)
        fail(errc::invalid_instance,
             "large side " + std::to_string(spec.L) + " is not a multiple of small side " +
                 std::to_string(spec.S));
    if (spec.L / spec.S < 2)
        fail(errc::invalid_instance, "side ratio L/S must be >= 2");
    if (!(spec.dx > 0.0) || !(spec.dy > 0.0))
        fail(errc::invalid_instance, "element spacings must be positive");
}

tileability_report check_tileability(const aperture_spec& spec, bool require_large) {
    validate(spec);
    tileability_report report;
    bool rows_ok = spec.M % spec.S == 0;
    bool cols_ok = spec.N % spec.S == 0;
    report.reasons.push_back("S divides M: " + std::string(rows_ok ? "yes" : "no") + " (" +
                             std::to_string(spec.M) + " mod " + std::to_string(spec.S) + " = " +
                             std::to_string(spec.M % spec.S) + ")");
    report.reasons.push_back("S divides N: " + std::string(cols_ok ? "yes" : "no") + " (" +
                             std::to_string(spec.N) + " mod " + std::to_string(spec.S) + " = " +
                             std::to_string(spec.N % spec.S) + ")");
    bool fits = true;
    if (require_large) {
        fits = spec.M >= spec.L || spec.N >= spec.L;
        report.reasons.push_back("max(M,N) >= L: " + std::string(fits ? "yes" : "no"));
    }
    report.tileable = rows_ok && cols_ok && fits;
    return report;
}

virtual_grid to_virtual(const aperture_spec& spec) {
    validate(spec);
    if (spec.M % spec.S != 0 || spec.N % spec.S != 0)
        fail(errc::invalid_instance, "small tile side must divide both aperture dimensions");
    virtual_grid grid;
    grid.m_hat = spec.M / spec.S;
    grid.n_hat = spec.N / spec.S;
    grid.l_hat = spec.L / spec.S;
    grid.anchor_rows = grid.m_hat - grid.l_hat + 1;
    grid.anchor_cols = grid.n_hat - grid.l_hat + 1;
    return grid;
}

} // namespace msta
