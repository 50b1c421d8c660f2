#pragma once

// JSON encoding of inputs and reports. Rationals travel as strings ("-3/4")
// so that no value ever passes through floating point; integers are also
// accepted on input.

#include <json.hpp>

#include "fmcalc/cycle_sheaves.hpp"
#include "fmcalc/field.hpp"
#include "fmcalc/fm_lattice.hpp"
#include "fmcalc/grr.hpp"
#include "fmcalc/moduli_solver.hpp"
#include "fmcalc/scan.hpp"
#include "fmcalc/stability.hpp"

namespace fmcalc {

using Json = nlohmann::ordered_json;

Rational rational_from_json(const Json& j, const std::string& where);
Json rational_to_json(const Rational& q);
long integer_from_json(const Json& j, const std::string& where);
const Json& require(const Json& j, const std::string& key, const std::string& where);
Json parse_json_file(const std::string& path);

namespace fm {

// {"a", "b", "c", "n"} with optional "e" (checked), "source", "target".
KernelData kernel_from_json(const Json& j);
Json kernel_to_json(const KernelData& k);
// {"r", "d"} with optional "space" and "shift".
FiberClass fiber_class_from_json(const Json& j, const std::string& default_space);
Json fiber_class_to_json(const FiberClass& v);
// A fiber class record with an optional "dual" flag.
PClass pclass_from_json(const Json& j);
Json pclass_to_json(const PClass& p);

}  // namespace fm

namespace cyc {

CycleBundle bundle_from_json(std::size_t n, const Json& j, const std::string& where);
Json bundle_to_json(const CycleBundle& e);
PolarizedCycle polarization_from_json(std::size_t n, const Json& j);
Json polarization_to_json(const PolarizedCycle& c);
Json test_sheaf_to_json(const RankOneTestSheaf& t);

template <class F>
Json stability_to_json(const StabilityReport<F>& r);

Json scan_to_json(const ScanReport& r);

}  // namespace cyc

namespace grr {

// Classes are objects mapping basis names to rationals; omitted names are 0.
Class class_from_json(const Ring& r, const Json& j, const std::string& where);
Json class_to_json(const Ring& r, const Class& c);
Ring ring_from_json(const Json& j, const std::string& where);
Json ring_to_json(const Ring& r);
Fibration fibration_from_json(const Json& j);

SolverInput solver_input_from_json(const Json& j);
Json solver_input_to_json(const SolverInput& in);
Json solver_report_to_json(const SolverReport& r);

}  // namespace grr
}  // namespace fmcalc
