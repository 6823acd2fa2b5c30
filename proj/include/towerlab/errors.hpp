/*
   Copyright 2026 the towerlab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TOWERLAB_ERRORS_HPP
#define TOWERLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace towerlab {

/// Base class for every towerlab error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TOWERLAB_ERROR(Name)                                            \
    struct Name : Error {                                               \
        explicit Name(const std::string& msg = #Name) : Error(msg) {}   \
    }

// field construction / arithmetic
TOWERLAB_ERROR(NotPrime);
TOWERLAB_ERROR(ReducibleModulus);
TOWERLAB_ERROR(CtxMismatch);
TOWERLAB_ERROR(DivisionByZero);
TOWERLAB_ERROR(NotSubpower);
TOWERLAB_ERROR(NotSubfield);
TOWERLAB_ERROR(AllPowers);

// polynomials
TOWERLAB_ERROR(DivisionByZeroPoly);
TOWERLAB_ERROR(NotSubgroup);
TOWERLAB_ERROR(SearchTooLarge);

// symmetry
TOWERLAB_ERROR(HasSubfieldRoot);

// towers and the local engine
TOWERLAB_ERROR(WildUnreduced);
TOWERLAB_ERROR(ZeroResidue);
TOWERLAB_ERROR(PrecisionExhausted);
TOWERLAB_ERROR(IrreducibilityUnverified);
TOWERLAB_ERROR(InvalidStep);
TOWERLAB_ERROR(InvalidParams);
TOWERLAB_ERROR(DegreeConstraintViolated);
TOWERLAB_ERROR(LinearizedImage);
TOWERLAB_ERROR(NotABasis);
TOWERLAB_ERROR(DegenerateB);

// analysis
TOWERLAB_ERROR(ScaleExceeded);
TOWERLAB_ERROR(NonIntegralGenus);
TOWERLAB_ERROR(NoConsistentGenus);

// file formats
struct ParseError : Error {
    int line = 0, column = 0;
    ParseError(const std::string& msg, int l, int c)
        : Error(msg + " at line " + std::to_string(l) + ", column " + std::to_string(c)),
          line(l), column(c) {}
};

#undef TOWERLAB_ERROR

}  // namespace towerlab

#endif  // TOWERLAB_ERRORS_HPP
