// Copyright 2026 The ddab Authors
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

// Incremental double description for polyhedral cones over the integers.

#ifndef DDAB_SRC_DOUBLE_DESCRIPTION_H_
#define DDAB_SRC_DOUBLE_DESCRIPTION_H_

#include <vector>

#include "ddab/rational.h"

namespace ddab::internal {

struct ConeGenerators {
  std::vector<IntegerVector> rays;       // extreme rays, primitive
  std::vector<IntegerVector> lineality;  // basis of the lineality space
};

// Generators of {z in Z^dim : c.z >= 0 for every c in constraints},
// starting from the whole space and inserting constraints in order.
ConeGenerators ComputeCone(int dim, const std::vector<IntegerVector>& constraints);

}  // namespace ddab::internal

#endif  // DDAB_SRC_DOUBLE_DESCRIPTION_H_
