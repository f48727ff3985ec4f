#pragma once

// Arbitrary-precision scalar types and the dense Eigen matrices built on them.
//
// Expression templates are disabled on the GMP-backed numbers so that they
// behave as plain value types inside Eigen expressions.

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace bwlat {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Index = Eigen::Index;

/// Dense integer matrix; each row is one basis vector.
using IntMatrix = Eigen::Matrix<Integer, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IntVector = Eigen::Matrix<Integer, 1, Eigen::Dynamic>;

/// Machine-word vectors produced by the enumerator.
using SmallVector = Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic>;

Integer pow2(unsigned exponent);

/// 2-adic valuation; nullopt for zero.
std::optional<unsigned> two_adic_valuation(const Integer& x);

/// k when |x| == 2^k, nullopt otherwise.
std::optional<unsigned> exact_log2(const Integer& x);

/// Floor division (rounds toward negative infinity), b != 0.
Integer floor_div(const Integer& a, const Integer& b);

/// Nearest integer to a/b, ties rounded up. b > 0.
Integer round_div(const Integer& a, const Integer& b);

/// Throws std::overflow_error when x does not fit.
std::int64_t to_int64(const Integer& x);

IntVector to_int_vector(const SmallVector& v);
SmallVector to_small_vector(const IntVector& v);

/// Decimal with the power-of-two part split out, e.g. "12 = 2^2·3".
std::string dyadic_factorization(const Integer& x);

}  // namespace bwlat
