#ifndef MLCALC_JSON_IO_HPP
#define MLCALC_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "mlcalc/chaos_vector.hpp"
#include "mlcalc/measure_mc.hpp"
#include "mlcalc/operators.hpp"

namespace mlcalc {

using Json = nlohmann::json;

/// {"dim": d, "degree": n, "coeffs": {"0,1,1": [re, im], ...}}; the empty key
/// holds a degree-0 scalar. Round-trips are bit exact.
Json sym_tensor_to_json(const SymTensor& t);
SymTensor sym_tensor_from_json(const Json& j);

/// {"beta": b, "dim": d, "role": "test"|"dist", "basis": "appell"|"monomial",
///  "kernels": [SymTensor...]}.
Json chaos_vector_to_json(const ChaosVector& v);
ChaosVector chaos_vector_from_json(const Json& j);

/// {"kind": ..., "y": [...], "c": ..., "k": ..., "kappa": SymTensor,
///  "l": ..., "m": ..., "matrix": [[...]], "ops": [...]}; only the fields the
/// kind needs are present.
Json operator_to_json(const OperatorRep& op);
OperatorRep operator_from_json(const Json& j);

/// {"value": .., "value_im": .., "std_error": .., "count": ..,
///  "analytic": ..?, "sigmas": ..?}.
Json estimate_to_json(const MCEstimate& est);
Json estimate_to_json(const MCEstimate& est, Cplx analytic);

Json bound_report_to_json(const BoundReport& rep);

} // namespace mlcalc

#endif
