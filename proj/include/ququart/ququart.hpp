// Copyright 2026 The Ququart Authors
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

#ifndef QUQUART_QUQUART_HPP
#define QUQUART_QUQUART_HPP

#include "ququart/error.hpp"
#include "ququart/fixtures.hpp"
#include "ququart/linalg.hpp"
#include "ququart/optics.hpp"
#include "ququart/prepare.hpp"
#include "ququart/qstate.hpp"
#include "ququart/report.hpp"
#include "ququart/simplex.hpp"
#include "ququart/tomo.hpp"

#endif  // QUQUART_QUQUART_HPP
