// Copyright 2026 The Causametrics Authors
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

#ifndef CAUSAMETRICS_CAUSAMETRICS_HPP
#define CAUSAMETRICS_CAUSAMETRICS_HPP

#include "causametrics/capacity.hpp"
#include "causametrics/harmonic.hpp"
#include "causametrics/json_io.hpp"
#include "causametrics/measures.hpp"
#include "causametrics/process_matrix.hpp"
#include "causametrics/protocol.hpp"
#include "causametrics/random.hpp"
#include "causametrics/reconstruct.hpp"
#include "causametrics/tensor.hpp"

#endif  // CAUSAMETRICS_CAUSAMETRICS_HPP
