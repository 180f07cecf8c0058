#ifndef BESSELLAB_RELATIONS_HPP
#define BESSELLAB_RELATIONS_HPP

// Integer relation detection and the catalog of moment identities resting on
// it.  pslq() is the lattice reduction of Ferguson, Bailey and Arno: given a
// vector of high-precision values it either returns an integer vector a with
// |sum a_i v_i| below the detection threshold, or certifies that every
// integer relation has l2 norm above a reported bound.  The catalog pins the
// experimentally discovered identities in denominator-cleared integer form;
// verify_catalog_identities() recomputes every value from quadrature and
// special functions and rediscovers each vector blind, so a regression in
// any feeding module surfaces as a mismatch here.

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bessellab/bigreal.hpp"
#include "bessellab/contfrac.hpp"
#include "bessellab/exceptions.hpp"
#include "bessellab/precision.hpp"
#include "bessellab/quadrature.hpp"
#include "bessellab/rational.hpp"
#include "bessellab/specfun.hpp"

namespace bessellab {

// ---------------------------------------------------------------------------
// Problem statement and outcomes

struct RelationProblem {
    std::vector<BigReal> values;
    std::vector<std::string> labels;  // optional; empty or one per value
    BigInt max_coeff = BigInt(1000000);
    long confidence_digits = 40;
};

// Coefficients are canonical: gcd one, first nonzero entry positive.  The
// residual is a certified upper bound for |sum a_i v_i| including the input
// radii.
struct IntegerRelation {
    std::vector<BigInt> coefficients;
    BigReal residual;
};

// No integer relation with l2 norm below norm_bound exists among the inputs;
// the bound is read off the reduced matrix and is precision-limited, not a
// proof of independence.
struct NoRelation {
    BigReal norm_bound;
};

using RelationOutcome = std::variant<IntegerRelation, NoRelation>;

namespace detail {

inline void canonicalize_relation(std::vector<BigInt>& a) {
    BigInt g(0);
    for (const BigInt& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g > 1)
        for (BigInt& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    for (const BigInt& c : a) {
        if (c == 0) continue;
        if (c < 0)
            for (BigInt& e : a) e = -e;
        break;
    }
}

inline BigReal ball_combination(const std::vector<BigInt>& a,
                                const std::vector<BigReal>& values, long wp) {
    BigReal s(wp);
    for (size_t i = 0; i < a.size(); ++i) s += BigReal(a[i], wp) * values[i];
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The engine.  State: y the updated value vector, H the lower-trapezoidal
// matrix of partial-norm ratios, B the unimodular column transform with
// y = v B / |v|.  A tiny y_j certifies column j of B as a relation; the
// largest diagonal of H certifies the exclusion bound 1 / max|H_jj|.

inline RelationOutcome pslq(const RelationProblem& problem) {
    const size_t n = problem.values.size();
    if (n < 2) throw DomainError("pslq: need at least two values");
    if (!problem.labels.empty() && problem.labels.size() != n)
        throw DomainError("pslq: labels must be empty or match the values");
    if (problem.max_coeff < 1) throw DomainError("pslq: max_coeff must be positive");
    if (problem.confidence_digits < 1)
        throw DomainError("pslq: confidence_digits must be positive");

    const long conf = problem.confidence_digits;
    const long need_digits = conf + 10;
    long wp = Precision(conf + 10).bits() + 32;
    for (size_t i = 0; i < n; ++i) {
        const BigReal& v = problem.values[i];
        if (!v.is_finite()) throw DomainError("pslq: value " + std::to_string(i) + " is not finite");
        if (!v.radius_below_pow10(need_digits))
            throw PrecisionError(
                "pslq: value " + std::to_string(i) + " carries radius 10^" +
                    std::to_string(static_cast<long>(v.log10_radius())) + " but confidence " +
                    std::to_string(conf) + " requires " + std::to_string(need_digits) +
                    " certified digits",
                v.log10_radius());
        if (v.lower_abs().sign() <= 0)
            throw DomainError("pslq: value " + std::to_string(i) +
                              " is numerically zero; drop it before reducing");
        wp = std::max(wp, v.prec());
    }

    // Centres only, divided by the largest magnitude for conditioning.  The
    // reduction below tracks the ball radii it accrues, but all decisions are
    // by centre; certification happens on the original values at the end.
    size_t imax = 0;
    for (size_t i = 1; i < n; ++i)
        if (mpfr_cmpabs(problem.values[i].raw(), problem.values[imax].raw()) > 0) imax = i;
    BigReal d(wp);
    mpfr_abs(d.raw(), problem.values[imax].raw(), MPFR_RNDN);
    std::vector<BigReal> x(n, BigReal(wp));
    for (size_t i = 0; i < n; ++i)
        mpfr_div(x[i].raw(), problem.values[i].raw(), d.raw(), MPFR_RNDN);

    // Tail norms s_k = |(x_k, ..., x_{n-1})|; all positive since no input is
    // numerically zero.
    std::vector<BigReal> s(n, BigReal(wp));
    {
        BigReal acc(wp);
        for (size_t k = n; k-- > 0;) {
            acc += x[k] * x[k];
            s[k] = sqrt(acc);
        }
    }
    std::vector<BigReal> y(n, BigReal(wp));
    for (size_t i = 0; i < n; ++i) y[i] = x[i] / s[0];

    std::vector<std::vector<BigReal>> H(n, std::vector<BigReal>(n - 1, BigReal(wp)));
    for (size_t j = 0; j + 1 < n; ++j) {
        H[j][j] = s[j + 1] / s[j];
        for (size_t i = j + 1; i < n; ++i) H[i][j] = -(x[i] * x[j]) / (s[j] * s[j + 1]);
    }
    std::vector<std::vector<BigInt>> B(n, std::vector<BigInt>(n, BigInt(0)));
    for (size_t i = 0; i < n; ++i) B[i][i] = 1;

    auto reduce = [&]() {
        for (size_t i = 1; i < n; ++i) {
            for (size_t j = std::min(i, n - 1); j-- > 0;) {
                if (H[j][j].is_zero()) continue;
                BigInt t = (H[i][j] / H[j][j]).to_nearest_mpz();
                if (t == 0) continue;
                BigReal tb(t, wp);
                y[j] += tb * y[i];
                for (size_t k = 0; k <= j; ++k) H[i][k] -= tb * H[j][k];
                for (size_t k = 0; k < n; ++k) B[k][j] += t * B[k][i];
            }
        }
    };

    // Detection threshold on y: |sum a_i v_i| = |v|_2 |y_j|, so compare |y_j|
    // against eps / |v|_2.
    BigReal eps = BigReal(1L, wp) / pow_ui(BigReal(10L, wp), static_cast<unsigned long>(conf));
    BigReal eps_scaled = eps / (d * s[0]);
    BigReal gamma = BigReal(2L, wp) / sqrt(BigReal(3L, wp)) + BigReal(1L, wp) / BigReal(100L, wp);
    std::vector<BigReal> gpow(n - 1, BigReal(wp));
    gpow[0] = gamma;
    for (size_t j = 1; j + 1 < n; ++j) gpow[j] = gpow[j - 1] * gamma;

    BigReal max_coeff_real(problem.max_coeff, wp);
    BigReal stop_bound = sqrt(BigReal(static_cast<long>(n), wp)) * max_coeff_real;
    BigReal best_bound(wp);
    const long cap = 64L * static_cast<long>(n) * static_cast<long>(n) * conf;

    reduce();
    for (long iter = 0;; ++iter) {
        size_t jmin = 0;
        BigReal ymin = y[0].upper_abs();
        for (size_t j = 1; j < n; ++j) {
            BigReal a = y[j].upper_abs();
            if (a.cmp(ymin) < 0) {
                ymin = a;
                jmin = j;
            }
        }
        if (ymin.cmp(eps_scaled) < 0) {
            std::vector<BigInt> a(n);
            for (size_t k = 0; k < n; ++k) a[k] = B[k][jmin];
            detail::canonicalize_relation(a);
            BigInt amax(0);
            for (const BigInt& c : a)
                if (mpz_cmpabs(c.get_mpz_t(), amax.get_mpz_t()) > 0)
                    amax = abs(c);
            if (amax > problem.max_coeff) return NoRelation{best_bound};
            BigReal resid = detail::ball_combination(a, problem.values, wp).upper_abs();
            if (resid.cmp(eps) >= 0)
                throw PrecisionError(
                    "pslq: detection at iteration " + std::to_string(iter) +
                        " could not be certified from the input radii",
                    resid.is_zero() ? -1.0e18 : std::log10(std::abs(resid.to_double())));
            return IntegerRelation{std::move(a), std::move(resid)};
        }

        BigReal hmax(wp);
        for (size_t j = 0; j + 1 < n; ++j) {
            BigReal ab = H[j][j].upper_abs();
            if (ab.cmp(hmax) > 0) hmax = ab;
        }
        BigReal bound = BigReal(1L, wp) / hmax;
        if (bound.cmp(best_bound) > 0) best_bound = bound;
        if (best_bound.cmp(stop_bound) > 0) return NoRelation{best_bound};
        if (iter >= cap) return NoRelation{best_bound};

        size_t r = 0;
        BigReal score(wp);
        for (size_t j = 0; j + 1 < n; ++j) {
            BigReal sc = gpow[j] * abs(H[j][j]);
            if (sc.cmp(score) > 0) {
                score = sc;
                r = j;
            }
        }
        std::swap(y[r], y[r + 1]);
        H[r].swap(H[r + 1]);
        for (size_t k = 0; k < n; ++k) std::swap(B[k][r], B[k][r + 1]);
        if (r + 2 < n) {
            BigReal a0 = H[r][r];
            BigReal b0 = H[r][r + 1];
            BigReal t0 = sqrt(a0 * a0 + b0 * b0);
            if (t0.lower_abs().sign() > 0) {
                BigReal c = a0 / t0;
                BigReal sn = b0 / t0;
                for (size_t i = r; i < n; ++i) {
                    BigReal u = H[i][r];
                    BigReal v = H[i][r + 1];
                    H[i][r] = c * u + sn * v;
                    H[i][r + 1] = c * v - sn * u;
                }
            }
        }
        reduce();
    }
}

// ---------------------------------------------------------------------------
// Identity catalog.  Each entry lists the values of one discovered identity
// in a fixed order together with the canonical integer vector a satisfying
// sum a_i v_i = 0.  nested(n, m) abbreviates the iterated moment
//     int_0^inf u^n K0^2 K1^2 [ int_0^u x^m K0^2 K1 I1 dx ] du,
// and the nested entries below are the symmetrised sums
// nested(n, m) + nested(m, n).

struct IdentityValue {
    enum class Kind {
        constant_one,
        zeta3,
        zeta5,
        inv_zeta2,
        plain_moment,     // f below
        nested_pair_sum,  // nested(n, m) + nested(m, n)
        rho2_alpha6,      // i_rho2_alpha6()
        chain_value,      // z(0) of the conjectural zeta(2) fraction
    };
    Kind kind = Kind::constant_one;
    std::string label;
    BesselProduct f{};
    long nested_n = 0;
    long nested_m = 0;
};

struct RelationIdentity {
    std::string name;
    Provenance provenance = Provenance::pslq_conjectural;
    std::vector<IdentityValue> values;
    std::vector<BigInt> published;
};

namespace detail {

inline BesselProduct nested_outer(long p) { return BesselProduct{p, 2, 2, 0, 0}; }
inline BesselProduct nested_inner(long p) { return BesselProduct{p, 2, 1, 0, 1}; }

}  // namespace detail

inline const std::vector<RelationIdentity>& relation_catalog() {
    static const std::vector<RelationIdentity> entries = [] {
        auto special = [](IdentityValue::Kind k, const char* label) {
            IdentityValue v;
            v.kind = k;
            v.label = label;
            return v;
        };
        auto plain = [](long p, long a) {
            IdentityValue v;
            v.kind = IdentityValue::Kind::plain_moment;
            v.f = BesselProduct{p, a, 0, 0, 0};
            v.label = "int " + v.f.to_string();
            return v;
        };
        auto nested = [](long n, long m) {
            IdentityValue v;
            v.kind = IdentityValue::Kind::nested_pair_sum;
            v.nested_n = n;
            v.nested_m = m;
            v.label = "nested(" + std::to_string(n) + "," + std::to_string(m) + ") + nested(" +
                      std::to_string(m) + "," + std::to_string(n) + ")";
            return v;
        };
        auto ints = [](std::initializer_list<long> cs) {
            std::vector<BigInt> v;
            for (long c : cs) v.emplace_back(c);
            return v;
        };
        using K = IdentityValue::Kind;
        std::vector<RelationIdentity> out;
        out.push_back({"zeta5-weight8", Provenance::pslq_conjectural,
                       {special(K::zeta5, "zeta(5)"), plain(1, 8), plain(3, 8)},
                       ints({77, -1, 72})});
        out.push_back({"rho2-alpha6", Provenance::pslq_conjectural,
                       {special(K::rho2_alpha6, "rho2-alpha6"), plain(1, 6), plain(3, 6),
                        special(K::zeta5, "zeta(5)")},
                       ints({480, -16, -24, 93})});
        out.push_back({"nested-13", Provenance::pslq_conjectural,
                       {nested(1, 3), plain(1, 6), plain(3, 6), special(K::zeta3, "zeta(3)"),
                        special(K::zeta5, "zeta(5)")},
                       ints({3840, -80, 72, 280, 93})});
        out.push_back({"nested-15", Provenance::pslq_conjectural,
                       {nested(1, 5), plain(1, 6), plain(3, 6), special(K::constant_one, "1"),
                        special(K::zeta3, "zeta(3)"), special(K::zeta5, "zeta(5)")},
                       ints({46080, -844, -7906, -55, 4480, 837})});
        out.push_back({"nested-17", Provenance::pslq_conjectural,
                       {nested(1, 7), plain(1, 6), plain(3, 6), special(K::constant_one, "1"),
                        special(K::zeta3, "zeta(3)"), special(K::zeta5, "zeta(5)")},
                       ints({6912000, -434924, -8513234, -418155, 3686400, 376650})});
        out.push_back({"nested-35", Provenance::pslq_conjectural,
                       {nested(3, 5), plain(1, 6), plain(3, 6), special(K::constant_one, "1"),
                        special(K::zeta3, "zeta(3)"), special(K::zeta5, "zeta(5)")},
                       ints({2764800, 115684, -2303066, -219795, -360000, -37665})});
        out.push_back({"weight4-sum-rule", Provenance::proved,
                       {special(K::constant_one, "1"), plain(1, 4), plain(3, 4)},
                       ints({3, -4, 16})});
        out.push_back({"chain-zeta2", Provenance::pslq_conjectural,
                       {special(K::chain_value, "z0(zeta2-pslq)"), special(K::constant_one, "1"),
                        special(K::inv_zeta2, "1/zeta(2)")},
                       ints({1, 4, -7})});
        return out;
    }();
    return entries;
}

inline const RelationIdentity& relation_identity(const std::string& name) {
    for (const auto& e : relation_catalog())
        if (e.name == name) return e;
    throw DomainError("relation_identity: unknown identity \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Blind verification

struct IdentityCheck {
    std::string name;
    Provenance provenance = Provenance::pslq_conjectural;
    std::vector<std::string> labels;
    std::vector<BigInt> published;
    std::vector<BigInt> recovered;
    BigReal residual;  // bound on |sum published_i v_i| from the ball values
    long digits_used = 0;
};

struct RelationReport {
    long target_digits = 0;
    long confidence_digits = 0;
    std::vector<IdentityCheck> checks;
};

namespace detail {

inline std::string vector_to_string(const std::vector<BigInt>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
    return s + ")";
}

}  // namespace detail

// Recomputes every catalogued value at prec and reruns the reduction blind.
// The confidence is ten digits below the quadrature target, so the certified
// radii meet the engine precondition exactly when the quadrature certifies
// its own target.  Any recovered vector differing from the published one is a
// hard failure.
inline RelationReport verify_catalog_identities(const Precision& prec) {
    if (prec.target_digits < 30)
        throw DomainError("verify_catalog_identities: need a target of at least 30 digits");
    const long conf = prec.target_digits - 10;
    const long bits = prec.bits();
    const auto& cat = relation_catalog();

    // One shared quadrature batch for all plain and nested values; the walker
    // reuses nodes, Bessel values and inner cumulative maps across the lot.
    std::vector<detail::BatchSpec> specs;
    std::map<std::pair<BesselProduct, BesselProduct>, size_t> slot;
    auto slot_for = [&](const BesselProduct& f, bool nested, const BesselProduct& g) {
        auto key = std::make_pair(f, nested ? g : BesselProduct{});
        auto it = slot.find(key);
        if (it != slot.end()) return it->second;
        if (nested)
            validate_nested_pair(f, g);
        else
            f.validate();
        specs.push_back(detail::BatchSpec{f, nested, g});
        return slot.emplace(key, specs.size() - 1).first->second;
    };
    for (const RelationIdentity& id : cat) {
        for (const IdentityValue& v : id.values) {
            if (v.kind == IdentityValue::Kind::plain_moment) {
                slot_for(v.f, false, {});
            } else if (v.kind == IdentityValue::Kind::nested_pair_sum) {
                slot_for(detail::nested_outer(v.nested_n), true, detail::nested_inner(v.nested_m));
                slot_for(detail::nested_outer(v.nested_m), true, detail::nested_inner(v.nested_n));
            }
        }
    }
    std::vector<BigReal> batch = detail::evaluate_batch(specs, prec);

    // Shared specials, computed once on demand.
    std::map<IdentityValue::Kind, BigReal> specials;
    auto special_value = [&](IdentityValue::Kind k) -> const BigReal& {
        auto it = specials.find(k);
        if (it != specials.end()) return it->second;
        BigReal v(bits);
        switch (k) {
            case IdentityValue::Kind::constant_one:
                v = BigReal(1L, bits);
                break;
            case IdentityValue::Kind::zeta3:
                v = zeta(3, bits);
                break;
            case IdentityValue::Kind::zeta5:
                v = zeta(5, bits);
                break;
            case IdentityValue::Kind::inv_zeta2: {
                BigReal pi = BigReal::pi(bits);
                v = BigReal(6L, bits) / (pi * pi);
                break;
            }
            case IdentityValue::Kind::rho2_alpha6:
                v = i_rho2_alpha6(prec);
                break;
            case IdentityValue::Kind::chain_value: {
                // Terms gain log10(27) digits each; the depth overshoots, and
                // the tail estimate is folded into the radius with headroom.
                const ContFracSpec& e = catalog_entry("zeta2-pslq");
                long depth = prec.target_digits + 40;
                v = cf_value(e, depth, prec);
                BigReal tail = mul_2exp(cf_tail_estimate(e, depth, prec).upper_abs(), 4);
                if (!tail.is_zero()) v.add_radius(tail.raw());
                break;
            }
            default:
                throw StructuralError("verify_catalog_identities: unhandled value kind");
        }
        return specials.emplace(k, std::move(v)).first->second;
    };

    RelationReport report;
    report.target_digits = prec.target_digits;
    report.confidence_digits = conf;
    for (const RelationIdentity& id : cat) {
        RelationProblem problem;
        problem.max_coeff = BigInt(20000000);
        problem.confidence_digits = conf;
        for (const IdentityValue& v : id.values) {
            problem.labels.push_back(v.label);
            switch (v.kind) {
                case IdentityValue::Kind::plain_moment:
                    problem.values.push_back(batch[slot_for(v.f, false, {})]);
                    break;
                case IdentityValue::Kind::nested_pair_sum: {
                    BigReal sum =
                        batch[slot_for(detail::nested_outer(v.nested_n), true,
                                       detail::nested_inner(v.nested_m))] +
                        batch[slot_for(detail::nested_outer(v.nested_m), true,
                                       detail::nested_inner(v.nested_n))];
                    problem.values.push_back(std::move(sum));
                    break;
                }
                default:
                    problem.values.push_back(special_value(v.kind));
                    break;
            }
        }
        RelationOutcome outcome = pslq(problem);
        const NoRelation* none = std::get_if<NoRelation>(&outcome);
        if (none != nullptr)
            throw StructuralError("verify_catalog_identities: \"" + id.name +
                                  "\" not rediscovered; exclusion bound " +
                                  none->norm_bound.to_string(6));
        IntegerRelation& rel = std::get<IntegerRelation>(outcome);
        if (rel.coefficients != id.published)
            throw StructuralError("verify_catalog_identities: \"" + id.name + "\" expected " +
                                  detail::vector_to_string(id.published) + " but recovered " +
                                  detail::vector_to_string(rel.coefficients));
        IdentityCheck check;
        check.name = id.name;
        check.provenance = id.provenance;
        check.labels = problem.labels;
        check.published = id.published;
        check.recovered = std::move(rel.coefficients);
        check.residual = detail::ball_combination(id.published, problem.values, bits).upper_abs();
        check.digits_used = prec.target_digits;
        report.checks.push_back(std::move(check));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Stable JSON export of a verification report.  Shape:
//
// {
//   "confidence_digits": <integer>,
//   "identities": [
//     {
//       "digits_used": <integer>,
//       "labels": ["<label>", ...],
//       "name": "<identifier>",
//       "provenance": "proved" | "pslq_conjectural",
//       "published_vector": ["<a0>", ...],
//       "recovered_vector": ["<a0>", ...],
//       "residual_decimal_string": "<decimal>"
//     }
//   ],
//   "schema": "bessellab-relation-report-v1",
//   "target_digits": <integer>
// }

inline std::string report_to_json(const RelationReport& report) {
    std::ostringstream os;
    auto int_array = [&os](const std::vector<BigInt>& v) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << "\"" << v[i].get_str() << "\"";
        os << "]";
    };
    auto string_array = [&os](const std::vector<std::string>& v) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << "\"" << v[i] << "\"";
        os << "]";
    };
    os << "{\n  \"confidence_digits\": " << report.confidence_digits << ",\n";
    os << "  \"identities\": [\n";
    for (size_t i = 0; i < report.checks.size(); ++i) {
        const IdentityCheck& c = report.checks[i];
        os << "    {\n";
        os << "      \"digits_used\": " << c.digits_used << ",\n";
        os << "      \"labels\": ";
        string_array(c.labels);
        os << ",\n";
        os << "      \"name\": \"" << c.name << "\",\n";
        os << "      \"provenance\": \""
           << (c.provenance == Provenance::proved ? "proved" : "pslq_conjectural") << "\",\n";
        os << "      \"published_vector\": ";
        int_array(c.published);
        os << ",\n";
        os << "      \"recovered_vector\": ";
        int_array(c.recovered);
        os << ",\n";
        os << "      \"residual_decimal_string\": \"" << c.residual.to_string(3) << "\"\n";
        os << "    }" << (i + 1 < report.checks.size() ? "," : "") << "\n";
    }
    os << "  ],\n  \"schema\": \"bessellab-relation-report-v1\",\n";
    os << "  \"target_digits\": " << report.target_digits << "\n}\n";
    return os.str();
}

}  // namespace bessellab

#endif
