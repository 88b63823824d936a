#pragma once

#include "fal/limitlab.hpp"

#include <iosfwd>
#include <string>

namespace fal {

// 17-significant-digit decimal rendering ("%.17g", '.' decimal point):
// every double round-trips through strtod to the identical bit pattern.
std::string format_g17(double v);

// RFC-4180-style CSV with LF line endings and the fixed header
// t,re_num,im_num,re_pred,im_pred,residual. Throws DomainError when the
// report violates its invariants (equal column lengths, strictly
// decreasing t grid).
void write_sweep_csv(const SweepReport& r, std::ostream& os);

// Parses a sweep written by write_sweep_csv; tolerates CRLF endings. The
// fitted exponents are not part of the CSV and are left at zero. Throws
// DomainError on a malformed header, row, or grid.
SweepReport read_sweep_csv(std::istream& is);

// Single-column CSV (header "value") of the sample values.
void write_samples_csv(const SampleSet& s, std::ostream& os);

// JSON documents; both carry "schema": "fal-1".
void write_sweep_json(const SweepReport& r, std::ostream& os);
void write_samples_json(const SampleSet& s, std::ostream& os);

} // namespace fal
