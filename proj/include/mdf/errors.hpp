// Copyright 2026 The mdf-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef MDF_ERRORS_HPP
#define MDF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mdf {

/// The detection outcome has zero probability under the given input, so the
/// conditional state is undefined.
class DegenerateConditioning : public std::domain_error {
   public:
    explicit DegenerateConditioning(const std::string &what) : std::domain_error(what) {
    }
};

/// No photon-number total passed the trust test; the processed distribution
/// is undefined.
class EmptyAcceptedSet : public std::domain_error {
   public:
    explicit EmptyAcceptedSet(const std::string &what) : std::domain_error(what) {
    }
};

}  // namespace mdf

#endif
