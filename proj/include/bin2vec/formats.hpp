// Copyright 2026 the bin2vec authors. All Rights Reserved.
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

#pragma once

namespace bin2vec::formats {

inline constexpr const char* kToolVersion = "1.0.0";

// On-disk schema versions. Bump only on incompatible changes.
inline constexpr const char* kStaticV1 = "bin2vec-static-v1";
inline constexpr const char* kTraceV1 = "bin2vec-trace-v1";
inline constexpr const char* kBundleV1 = "bin2vec-bundle-v1";
inline constexpr const char* kViewsV1 = "bin2vec-views-v1";
inline constexpr const char* kVectorsV1 = "bin2vec-vectors-v1";
inline constexpr const char* kReportV1 = "bin2vec-report-v1";

// Version of the per-view field lists. Two view files can only be compared
// when their layout versions match.
inline constexpr const char* kFieldLayoutV1 = "bin2vec-fields-v1";

}  // namespace bin2vec::formats
