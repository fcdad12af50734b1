// Copyright 2026 The xbench Authors
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

#ifndef XBENCH_XBENCH_HPP_
#define XBENCH_XBENCH_HPP_

#include "xbench/checks.hpp"
#include "xbench/dataset.hpp"
#include "xbench/distance.hpp"
#include "xbench/efficiency.hpp"
#include "xbench/errors.hpp"
#include "xbench/milp.hpp"
#include "xbench/oracle.hpp"
#include "xbench/panel.hpp"
#include "xbench/projection.hpp"
#include "xbench/report.hpp"
#include "xbench/selection.hpp"
#include "xbench/targets.hpp"

#endif  // XBENCH_XBENCH_HPP_
