/* Copyright 2026 The catpump Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace catpump {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CATPUMP_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

CATPUMP_DEFINE_ERROR(GaplessPoint);
CATPUMP_DEFINE_ERROR(EmptyLattice);
CATPUMP_DEFINE_ERROR(NonHermitianAssembly);
CATPUMP_DEFINE_ERROR(WidthTooSmall);
CATPUMP_DEFINE_ERROR(OutOfRange);
CATPUMP_DEFINE_ERROR(TruncationLoss);
CATPUMP_DEFINE_ERROR(DimensionTooLarge);
CATPUMP_DEFINE_ERROR(EigensolverFailure);
CATPUMP_DEFINE_ERROR(BoundaryContamination);
CATPUMP_DEFINE_ERROR(DegenerateCut);
CATPUMP_DEFINE_ERROR(ZeroState);
CATPUMP_DEFINE_ERROR(ConfigError);

#undef CATPUMP_DEFINE_ERROR

/// Non-fatal diagnostics (boundary mass, perturbative regime warnings).
/// The default sink writes to stderr; tests install a capturing sink.
using WarningSink = std::function<void(const std::string&)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace catpump
