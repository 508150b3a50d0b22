#ifndef O2GASKET_RATIONAL_HPP
#define O2GASKET_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace o2gasket {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace o2gasket

#endif
