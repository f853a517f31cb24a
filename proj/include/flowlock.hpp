// Copyright 2026 The Flowlock Authors
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

// Single include for the whole library.

#pragma once

#include "flowlock/engine.hpp"
#include "flowlock/error.hpp"
#include "flowlock/go/analyze.hpp"
#include "flowlock/go/parser.hpp"
#include "flowlock/go/printer.hpp"
#include "flowlock/go/typing.hpp"
#include "flowlock/predicate.hpp"
#include "flowlock/report.hpp"
#include "flowlock/smtlib.hpp"
#include "flowlock/solver.hpp"
#include "flowlock/text.hpp"
#include "flowlock/type.hpp"
