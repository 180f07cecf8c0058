#ifndef BESSELLAB_TESTS_ORACLES_HPP
#define BESSELLAB_TESTS_ORACLES_HPP

// Reference values frozen from an independent multiprecision evaluation
// (mpmath 1.3.0: besselk/besseli/polygamma point values at 62 significant
// digits, direct quadrature of the moment integrands at 52).  Tests compare
// against these, never against the code under test.

#include <bessellab/bigreal.hpp>

namespace oracles {

// modified Bessel point values
inline constexpr const char* K0_1 = "0.42102443824070833333562737921260903613621974822666047229896955";
inline constexpr const char* K1_1 = "0.60190723019723457473754000153561733926158688996810645601776796";
inline constexpr const char* K0_eighth = "2.2078690867449700600076121448498205863852465097628120371008832";
inline constexpr const char* K1_eighth = "7.8311182991157511634643381569979800768348561970307674716020779";
inline constexpr const char* K0_5 = "0.0036910983340425942747352610074569950990019443446957213263019018";
inline constexpr const char* K1_5 = "0.0040446134454521642083650218375406113030197252633154614448173748";
inline constexpr const char* K0_60 = "1.4138978405591078090956462982417012031617565348657311244955711e-27";
inline constexpr const char* K1_60 = "1.4256320265171043232143886104292174091512302559728059941296753e-27";
inline constexpr const char* K0_tiny = "13.931442073626419413437074672236471450191139959829875858091376"; // x = 1e-6
inline constexpr const char* K1_tiny = "999999.99999278427896318770788341106416172938804737817142761663";
inline constexpr const char* I0_1 = "1.2660658777520083355982446252147175376076703113549622068081353";
inline constexpr const char* I1_1 = "0.56515910399248502720769602760986330732889962162109200948029449";
inline constexpr const char* I0_2 = "2.2795853023360672674372044408115333532858411027854590540708398";
inline constexpr const char* I1_2 = "1.5906368546373290633822544249996662479544781594955366471322880";
inline constexpr const char* I0_30 = "781672297823.97748971738981670529500544494425397794700334768877";
inline constexpr const char* I1_30 = "768532038938.95699949429471078818018190713878837379967672568491";
inline constexpr const char* I0_60 = "5894077055609801168278817.4403339047379789830203162139496595651";
inline constexpr const char* I1_60 = "5844751588390468281335172.8725208370448977797899839320529805129";

// trigamma at rational arguments
inline constexpr const char* PSI1_THIRD = "10.095597125427094081792004099892516360518904119280978141941683";
inline constexpr const char* PSI1_TWO_THIRDS = "3.0638754093587174099873172332756851532326950903734093599427826";
inline constexpr const char* PSI1_QUARTER = "17.197329154507110739271319119335224021506894401494167700545334";
inline constexpr const char* PSI1_FIVE_SEVENTHS = "2.7446928385428259073281903175274111774554120637293029989378722";

// moment integrals int_0^inf u^p K0^a K1^b I0^c du
inline constexpr const char* MOM_U_K0_3 = "0.5859768096723647226503905722180692672738507524089641";
inline constexpr const char* MOM_U_K0_4 = "1.051799790264644999724770891322518741919363005797937";
inline constexpr const char* MOM_U3_K0_4_K1_2 = "0.9540030297455369325778635943717567122366267326726454";
inline constexpr const char* MOM_U_I0_K0_3 = "0.6168502750680849136771556874922594459571062129525494";
inline constexpr const char* MOM_U2_K0_K1 = "0.5000000000000000000000000000000000000000000000000000";
inline constexpr const char* MOM_K0_2 = "2.467401100272339654708622749969037783828424851810198";
inline constexpr const char* MOM_U_K0_4_DEEP =
    "1.05179979026464499972477089132251874191936300579793652156823761092410"
    "8430063023953913148889408168350877924263070853129491180496498839";

// nested moment int_0^inf u K0^2 K1^2 [ int_0^u x^2 K0 K1 dx ] du, evaluated
// through the exact inner antiderivative (1 - u^2 K1(u)^2)/2
inline constexpr const char* NESTED_K022_X2K0K1 =
    "0.301701549828660966334803315298791899131752865369999935";

// A 62-digit decimal literal carries an absolute error up to one unit in its
// last printed place; parse generously and widen the radius accordingly.
inline bessellab::BigReal value(const char* s, long sig_digits = 62) {
    bessellab::BigReal v(s, sig_digits * 10 / 3 + 24);
    long e10 = 0;
    if (!v.is_zero()) {
        // decimal exponent of the leading digit
        e10 = static_cast<long>(mpfr_get_exp(v.raw()) * 0.30102999566398120);
    }
    mpfr_t r;
    mpfr_init2(r, bessellab::BigReal::kRadiusPrec);
    mpfr_set_si(r, e10 + 1 - sig_digits, MPFR_RNDU);
    mpfr_exp10(r, r, MPFR_RNDU);
    v.add_radius(r);
    mpfr_clear(r);
    return v;
}

} // namespace oracles

#endif
