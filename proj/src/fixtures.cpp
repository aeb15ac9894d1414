// Transcribed fixture data.

#include <array>
#include <cmath>

#include "steercert/construct.hpp"

namespace steercert {

namespace {

struct Entry2x2 {
  int bob, a, x;
  const char* d0;      // (0,0)
  const char* off_re;  // Re (0,1)
  const char* off_im;  // Im (0,1)
  const char* d1;      // (1,1)
};

// Two qubit Bobs, one Alice with binary settings and outcomes. Not
// quantum-realisable.
constexpr Entry2x2 kAbb1[] = {
    {0, 0, 0, "86505229615495/281474976710656", "8644919822415911/36028797018963968", "463283299018779/18014398509481984", "7512381172927199/36028797018963968"},
    {0, 1, 0, "37723717191037/140737488355328", "5332123403232109/2305843009213693952", "7972126598771139/36028797018963968", "243327339198373/1125899906842624"},
    {0, 0, 1, "8506857505773515/36028797018963968", "3381940540593419/36028797018963968", "1630332021704117/72057594037927936", "3751794212825959/18014398509481984"},
    {0, 1, 1, "1527885435739415/4503599627370496", "2673146854998997/18014398509481984", "4041763592978319/18014398509481984", "487204225101451/2251799813685248"},
    {1, 0, 0, "2038719144082355/4503599627370496", "7589461495857015/72057594037927936", "6552116316195633/1152921504606846976", "284412176381465/4503599627370496"},
    {1, 1, 0, "1209315864020551/4503599627370496", "6624831370177975/72057594037927936", "992983320980893/4503599627370496", "971152442886125/4503599627370496"},
    {1, 0, 1, "687889890777155/2251799813685248", "3855767902614183/288230376151711744", "1339362793814727/9007199254740992", "5004207678990951/36028797018963968"},
    {1, 1, 1, "468063806637149/1125899906842624", "6625175445190723/36028797018963968", "5582338054938701/72057594037927936", "630038659393721/4503599627370496"},
};

constexpr const char* kN1 = "2924286153215233/9007199254740992";
constexpr const char* kN2 = "2689945358119939/36028797018963968";
constexpr const char* kN3 = "6317253896621053/36028797018963968";
constexpr const char* kN4 = "1579313474155263/9007199254740992";

// A quantum-realisable assemblage with real entries.
constexpr const char* kMinusN2 = "-2689945358119939/36028797018963968";
constexpr Entry2x2 kAbbPqnl[] = {
    {0, 0, 0, kN1, kN2, "0", kN3},      {0, 1, 0, kN3, kMinusN2, "0", kN1},
    {0, 0, 1, kN4, kMinusN2, "0", kN1}, {0, 1, 1, kN1, kN2, "0", kN3},
    {1, 0, 0, kN1, kMinusN2, "0", kN3}, {1, 1, 0, kN3, kN2, "0", kN1},
    {1, 0, 1, kN1, kMinusN2, "0", kN3}, {1, 1, 1, kN4, kN2, "0", kN1},
};

// Components (re, im) of the state vector as printed; the state used is
// their complex conjugate, normalised.
constexpr std::array<std::array<const char*, 2>, 16> kPtp1Psi = {{
    {"90/20389", "374/3209"},
    {"-228/1439", "-116/987"},
    {"933/4015", "241/10931"},
    {"-659/1299", "-983/8054"},
    {"190/9687", "-289/1353"},
    {"-352/8837", "62/621"},
    {"-356/2211", "-269/1254"},
    {"171/3658", "358/2201"},
    {"-280/1671", "-108/2369"},
    {"-221/2374", "121/1803"},
    {"457/2027", "-415/1774"},
    {"-392/1353", "-338/2799"},
    {"710/7719", "-226/1985"},
    {"214/2159", "-211/1007"},
    {"-297/3218", "259/774"},
    {"417/3082", "-61/1741"},
}};

template <std::size_t N>
ExactElements build(const Entry2x2 (&table)[N]) {
  ExactElements out;
  for (const auto& e : table) {
    QMatrix m(2, 2);
    m(0, 0) = QComplex(parse_rational(e.d0));
    m(1, 1) = QComplex(parse_rational(e.d1));
    const Rational re = parse_rational(e.off_re);
    const Rational im = parse_rational(e.off_im);
    m(0, 1) = QComplex(re, im);
    m(1, 0) = QComplex(re, -im);
    auto& slot = out[ElementKey{{static_cast<std::size_t>(e.a)}, {static_cast<std::size_t>(e.x)}}];
    slot.resize(2);
    slot[e.bob] = std::move(m);
  }
  return out;
}

}  // namespace

ExactElements fixture_exact(Fixture f) {
  switch (f) {
    case Fixture::ABB_1:
      return build(kAbb1);
    case Fixture::ABB_PQNL:
      return build(kAbbPqnl);
    default:
      throw InvalidArgument("fixture_exact: only the transcribed fixtures carry exact entries");
  }
}

std::vector<cplx> abb_ptp1_state_vector() {
  std::vector<cplx> psi;
  double norm2 = 0.0;
  for (const auto& [re, im] : kPtp1Psi) {
    const cplx z(to_double(parse_rational(re)), -to_double(parse_rational(im)));
    norm2 += std::norm(z);
    psi.push_back(z);
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& z : psi) z *= s;
  return psi;
}

}  // namespace steercert
