#ifndef GEOTRI_CONGRUENCE_HPP
#define GEOTRI_CONGRUENCE_HPP

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace geotri {
namespace congruence {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
// dense polynomial, coefficient of x^i at index i
using QPoly = std::vector<Rat>;

// ---------------------------------------------------------------- number field

struct NumberField {
  QPoly minpoly;  // monic, irreducible over Q
  int degree() const { return int(minpoly.size()) - 1; }
};
using FieldPtr = std::shared_ptr<const NumberField>;

// verifies monic + irreducible (mod-p certificate, else exact factor search)
FieldPtr make_field(QPoly minpoly, int degree_bound = 8);
FieldPtr rationals();  // minpoly x, generator 0

// exact irreducibility test over Q (degree >= 1)
bool irreducible_over_q(const QPoly& f);

struct NFElem {
  FieldPtr F;
  std::vector<Rat> c;  // power-basis coordinates 1, a, ..., a^{d-1}
};

NFElem nf(const FieldPtr& F, const Rat& r);
NFElem nf_gen(const FieldPtr& F);
NFElem nf_make(const FieldPtr& F, std::vector<Rat> coords);

NFElem operator+(const NFElem& a, const NFElem& b);
NFElem operator-(const NFElem& a, const NFElem& b);
NFElem operator-(const NFElem& a);
NFElem operator*(const NFElem& a, const NFElem& b);
NFElem operator/(const NFElem& a, const NFElem& b);
bool operator==(const NFElem& a, const NFElem& b);
bool operator!=(const NFElem& a, const NFElem& b);

bool nf_is_zero(const NFElem& a);
bool nf_is_rational(const NFElem& a);
NFElem nf_inv(const NFElem& a);
NFElem nf_pow(const NFElem& a, const Int& k);  // negative k via the inverse

// monic minimal polynomial of x over Q
QPoly minimal_polynomial(const NFElem& x);
bool is_root_of_unity(const NFElem& x);

// complex embeddings of x, one per root of the field minimal polynomial
std::vector<std::complex<double>> complex_embeddings(const NFElem& x);

// ---------------------------------------------------------------- finite field

// F_{p^e} = F_p[t]/(modulus), elements as coefficient vectors of length e
struct FiniteField {
  long long p = 0;
  std::vector<long long> modulus;  // monic irreducible over F_p, ascending
  int e = 0;
};
using FFElem = std::vector<long long>;

FFElem ff_zero(const FiniteField& K);
FFElem ff_one(const FiniteField& K);
FFElem ff_from_int(const FiniteField& K, const Int& n);
FFElem ff_gen(const FiniteField& K);  // the class of t
FFElem ff_add(const FiniteField& K, const FFElem& a, const FFElem& b);
FFElem ff_sub(const FiniteField& K, const FFElem& a, const FFElem& b);
FFElem ff_mul(const FiniteField& K, const FFElem& a, const FFElem& b);
FFElem ff_inv(const FiniteField& K, const FFElem& a);
FFElem ff_pow(const FiniteField& K, const FFElem& a, const Int& k);
bool ff_is_zero(const FFElem& a);
bool ff_in_prime_subfield(const FFElem& a);
Int ff_card(const FiniteField& K);  // p^e
// exact multiplicative order (card - 1 must factor over small primes)
Int ff_order(const FiniteField& K, const FFElem& a);
// true iff a has multiplicative order exactly q
bool ff_order_is(const FiniteField& K, const FFElem& a, const Int& q);
bool ff_order_divisible(const FiniteField& K, const FFElem& a, const Int& d);

// ---------------------------------------------------------------- residue maps

// residue class field map: the generator of the field goes to the class of t
// in F_p[t]/(factor), where factor divides minpoly mod p
struct ResidueMap {
  FieldPtr field;
  long long p = 0;
  std::vector<long long> factor;
  FiniteField codomain;
};

// one map per irreducible factor of minpoly mod p; empty when p divides a
// denominator of the minimal polynomial or the reduction is not squarefree
std::vector<ResidueMap> residue_maps(const FieldPtr& F, long long p);
FFElem reduce(const NFElem& x, const ResidueMap& r);  // BadDenominator
// true iff reduce(omega) lies outside the prime subfield F_p
bool omega_independent(const NFElem& omega, const ResidueMap& r);
std::string describe(const ResidueMap& r);

// scans primes p <= bound and the factors of the minimal polynomial mod p for
// a map with mult-order(image of lambda) == q and nonzero images of the
// listed elements; SearchExhausted is inconclusive, never a negative claim
ResidueMap find_prime_with_order(const NFElem& lambda, const Int& q,
                                 const std::vector<NFElem>& nonzero,
                                 long long bound = 100000);

// ------------------------------------------------------------ coset separation

struct Mat2 {
  NFElem a, b, c, d;
};

// y_+ = (2-a-d)/c and y_- = (-2-a-d)/c, the solutions of
// tr(g [[1,x],[0,1]]) = +-2; ZeroC when c = 0
std::pair<NFElem, NFElem> trace_targets(const Mat2& g);

// lowest-terms representation of y = (m + n omega) / v, v >= 1
struct OmegaCoords {
  long long m = 0, n = 0, v = 1;
};

// solves y = (m + n omega)/v over Q; nullopt when y is outside Q + Q omega;
// DependentBasis when omega is rational
std::optional<OmegaCoords> classify_in_Qomega(const NFElem& y, const NFElem& omega);

// witness map with reduce(y) outside { m + n reduce(omega) }, re-verifiable by
// enumeration; requires classify_in_Qomega(y, omega) == nullopt
ResidueMap separate_from_Zomega(const NFElem& y, const NFElem& omega,
                                long long bound = 100000);

// ------------------------------------------------------- quadratic extensions

// a field containing the base field of w together with a square root of w;
// when w is already a square the extension is trivial
struct SqrtExtension {
  FieldPtr M;
  NFElem base_gen;  // image in M of the base-field generator
  NFElem root;      // square root of w in M
  NFElem embed(const NFElem& x) const;
};
SqrtExtension adjoin_sqrt(const NFElem& w);

// ------------------------------------------------- loxodromic trace obstruction

// Case 1: lambda^{2m*} differs from both zeta^{2v*} and xi^{2v*}
// Case 2: lambda^{2m*} = zeta^{2v*} but lambda^{2v*m*} != xi^{2v*^2}
// Case 3: both coincide
struct ObstructionCertificate {
  int kase = 0;
  long long p = 0;     // congruence prime of the m-track filter (cases 1-2)
  ResidueMap sigma;    // on the extension field containing zeta, xi
  Int lambda_order;    // exact order of sigma(lambda)
  long long scanned = 0;  // exponents checked in the verification pass
  FieldPtr extension;
};
std::string describe(const ObstructionCertificate& c);

// Verifies that no exponent m compatible with v* m == star (mod p) gives
// sigma(r lambda^m + u lambda^{-m}) = +-2, over a full period of
// sigma(lambda).  track selects which of coords.m / coords.n plays star.
// omega, when given, restricts p to primes where omega stays independent.
ObstructionCertificate loxodromic_obstruction(
    const NFElem& r, const NFElem& u, const NFElem& lambda,
    const OmegaCoords& coords, char track, const NFElem* omega = nullptr,
    long long bound = 100000);

// ------------------------------------------------------------- SL(2) over F_q

// small finite field with full operation tables, for exhaustive SL(2) checks
struct SmallField {
  int q = 0, p = 0, e = 1;
  std::vector<long long> modulus;
  std::vector<int> addt, mult;  // q*q tables
  int add(int a, int b) const { return addt[a * q + b]; }
  int mul(int a, int b) const { return mult[a * q + b]; }
  int neg(int a) const;
  int inv(int a) const;  // a != 0
};
SmallField small_field(int q);  // q a prime power <= 49

using SMat = std::array<int, 4>;  // row major a b c d

int smat_det(const SmallField& K, const SMat& m);
int smat_trace(const SmallField& K, const SMat& m);
SMat smat_mul(const SmallField& K, const SMat& x, const SMat& y);
std::vector<SMat> sl2_elements(const SmallField& K);

// true iff the traces differ (a conjugacy obstruction); NonUnimodular when a
// determinant is not 1
bool sl2_trace_separation(int q, const SMat& x, const SMat& y);
// exhaustive conjugacy check over all of SL(2, F_q)
bool sl2_conjugate(int q, const SMat& x, const SMat& y);

}  // namespace congruence
}  // namespace geotri

#endif
