// Copyright 2026 The causal-fields Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cft/error.hpp"

namespace cft {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DuplicateEvent: return "DuplicateEvent";
    case ErrorCode::UnknownEvent: return "UnknownEvent";
    case ErrorCode::UnboundedQuery: return "UnboundedQuery";
    case ErrorCode::NotSeparated: return "NotSeparated";
    case ErrorCode::NotInCategory: return "NotInCategory";
    case ErrorCode::InvalidFoliation: return "InvalidFoliation";
    case ErrorCode::NotARegionOfC: return "NotARegionOfC";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadFactorIndex: return "BadFactorIndex";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NonEnumerableRegion: return "NonEnumerableRegion";
    case ErrorCode::NotCauchy: return "NotCauchy";
    case ErrorCode::NotAReversal: return "NotAReversal";
    case ErrorCode::NegativeTimeGap: return "NegativeTimeGap";
    case ErrorCode::InvalidMorphism: return "InvalidMorphism";
    case ErrorCode::NotSubset: return "NotSubset";
    case ErrorCode::WrongPredecessorSet: return "WrongPredecessorSet";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace cft
