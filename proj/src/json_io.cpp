#include "mlcalc/json_io.hpp"

#include <sstream>

namespace mlcalc {

namespace {

std::string key_to_string(const MultiIndex& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(idx[i]);
    }
    return s;
}

MultiIndex key_from_string(const std::string& s) {
    MultiIndex idx;
    if (s.empty()) return idx;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) idx.push_back(std::stoi(part));
    return idx;
}

} // namespace

Json sym_tensor_to_json(const SymTensor& t) {
    Json coeffs = Json::object();
    for (const auto& [k, v] : t.coeffs())
        coeffs[key_to_string(k)] = Json::array({v.real(), v.imag()});
    return Json{{"dim", t.dim()}, {"degree", t.degree()}, {"coeffs", coeffs}};
}

SymTensor sym_tensor_from_json(const Json& j) {
    SymTensor t(j.at("dim").get<int>(), j.at("degree").get<int>());
    for (const auto& [key, val] : j.at("coeffs").items()) {
        MultiIndex idx = key_from_string(key);
        t.set(idx, Cplx(val.at(0).get<double>(), val.at(1).get<double>()));
    }
    return t;
}

Json chaos_vector_to_json(const ChaosVector& v) {
    Json kernels = Json::array();
    for (int n = 0; n <= v.max_degree(); ++n)
        kernels.push_back(sym_tensor_to_json(v.kernel(n)));
    return Json{{"beta", v.params().beta},
                {"dim", v.dim()},
                {"role", v.role() == Role::TestFunction ? "test" : "dist"},
                {"basis", v.basis() == Basis::AppellP ? "appell" : "monomial"},
                {"kernels", kernels}};
}

ChaosVector chaos_vector_from_json(const Json& j) {
    MLParams params;
    params.beta = j.at("beta").get<double>();
    std::string role = j.at("role").get<std::string>();
    std::string basis = j.value("basis", "appell");
    int dim = j.at("dim").get<int>();
    const Json& kernels = j.at("kernels");
    ChaosVector v(params, dim,
                  role == "dist" ? Role::Distribution : Role::TestFunction,
                  basis == "monomial" ? Basis::Monomial : Basis::AppellP,
                  std::max<int>(0, static_cast<int>(kernels.size()) - 1));
    for (int n = 0; n < static_cast<int>(kernels.size()); ++n) {
        SymTensor t = sym_tensor_from_json(kernels[n]);
        if (t.degree() != n) throw DegreeMismatch("kernel list degree out of order");
        if (t.dim() != dim) throw DimMismatch("kernel dim differs from vector dim");
        v.kernel(n) = std::move(t);
    }
    return v;
}

namespace {

Json cvec_to_json(const std::vector<Cplx>& y) {
    Json arr = Json::array();
    bool complex = false;
    for (const auto& c : y)
        if (c.imag() != 0.0) complex = true;
    for (const auto& c : y) {
        if (complex)
            arr.push_back(Json::array({c.real(), c.imag()}));
        else
            arr.push_back(c.real());
    }
    return arr;
}

std::vector<Cplx> cvec_from_json(const Json& j) {
    std::vector<Cplx> out;
    for (const auto& e : j) {
        if (e.is_array())
            out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        else
            out.emplace_back(e.get<double>(), 0.0);
    }
    return out;
}

} // namespace

Json operator_to_json(const OperatorRep& op) {
    Json j{{"kind", op.kind_name()}};
    switch (op.kind()) {
        case OpKind::Identity:
            j["dim"] = op.dim();
            break;
        case OpKind::DiffConst:
            j["kappa"] = sym_tensor_to_json(op.diff_kernel());
            break;
        case OpKind::Gateaux:
        case OpKind::Translate:
            j["y"] = cvec_to_json(op.direction());
            break;
        case OpKind::Creation:
        case OpKind::Annihilation:
            j["dim"] = op.dim();
            j["k"] = op.basis_index();
            break;
        case OpKind::Scale:
            j["dim"] = op.dim();
            j["c"] = op.scale_factor();
            break;
        case OpKind::IntegralKernel: {
            const KernelLM& klm = op.kernel_lm();
            j["l"] = klm.l;
            j["m"] = klm.m;
            if (klm.l == 1 && klm.m == 1) {
                // emit the matrix form A[i][j] (creation slot = column)
                Json rows = Json::array();
                for (int i = 0; i < klm.dim; ++i) {
                    Json row = Json::array();
                    for (int jj = 0; jj < klm.dim; ++jj) {
                        auto it = klm.entries.find({{jj}, {i}});
                        row.push_back(it == klm.entries.end() ? 0.0
                                                              : it->second.real());
                    }
                    rows.push_back(row);
                }
                j["matrix"] = rows;
            } else {
                SymTensor kappa(klm.dim, klm.l + klm.m);
                for (const auto& [key, v] : klm.entries)
                    kappa.set(merge_sorted(key.first, key.second), v);
                j["kappa"] = sym_tensor_to_json(kappa);
            }
            break;
        }
        case OpKind::Composition: {
            Json ops = Json::array();
            for (const auto& p : op.parts()) ops.push_back(operator_to_json(p));
            j["ops"] = ops;
            break;
        }
    }
    return j;
}

OperatorRep operator_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return OperatorRep::identity(j.at("dim").get<int>());
    if (kind == "diff_const")
        return OperatorRep::diff_const(sym_tensor_from_json(j.at("kappa")));
    if (kind == "gateaux") return OperatorRep::gateaux(cvec_from_json(j.at("y")));
    if (kind == "translate") return OperatorRep::translate(cvec_from_json(j.at("y")));
    if (kind == "creation")
        return OperatorRep::creation(j.at("k").get<int>(), j.at("dim").get<int>());
    if (kind == "annihilation")
        return OperatorRep::annihilation(j.at("k").get<int>(), j.at("dim").get<int>());
    if (kind == "scale")
        return OperatorRep::scale(j.at("c").get<double>(), j.at("dim").get<int>());
    if (kind == "integral_kernel") {
        if (j.contains("matrix")) {
            std::vector<std::vector<Cplx>> A;
            for (const auto& row : j.at("matrix")) {
                std::vector<Cplx> r;
                for (const auto& e : row) r.emplace_back(e.get<double>(), 0.0);
                A.push_back(std::move(r));
            }
            return OperatorRep::integral_kernel(KernelLM::from_matrix(A));
        }
        int l = j.at("l").get<int>();
        int m = j.at("m").get<int>();
        return OperatorRep::integral_kernel(
            KernelLM::from_sym_tensor(l, m, sym_tensor_from_json(j.at("kappa"))));
    }
    if (kind == "composition") {
        std::vector<OperatorRep> ops;
        for (const auto& e : j.at("ops")) ops.push_back(operator_from_json(e));
        return OperatorRep::composition(std::move(ops));
    }
    throw InvalidArgument("unknown operator kind: " + kind);
}

Json estimate_to_json(const MCEstimate& est) {
    Json j{{"value", est.value.real()},
           {"std_error", est.std_error},
           {"count", est.count}};
    if (est.value.imag() != 0.0) j["value_im"] = est.value.imag();
    return j;
}

Json estimate_to_json(const MCEstimate& est, Cplx analytic) {
    Json j = estimate_to_json(est);
    j["analytic"] = analytic.real();
    if (analytic.imag() != 0.0) j["analytic_im"] = analytic.imag();
    j["sigmas"] = est.sigmas_from(analytic);
    return j;
}

Json bound_report_to_json(const BoundReport& rep) {
    Json cases = Json::array();
    for (const auto& c : rep.cases)
        cases.push_back(Json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"ratio", c.ratio}});
    return Json{{"kind", rep.kind},     {"p", rep.p},
                {"q", rep.q},           {"cases", cases},
                {"max_ratio", rep.max_ratio}, {"mean_ratio", rep.mean_ratio}};
}

} // namespace mlcalc
