// Copyright 2026 The mzi-herald Authors
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

#ifndef MZI_MZI_HPP
#define MZI_MZI_HPP

#include "mzi/component_moments.hpp"
#include "mzi/error.hpp"
#include "mzi/fock.hpp"
#include "mzi/genfunc.hpp"
#include "mzi/moments.hpp"
#include "mzi/scan.hpp"
#include "mzi/states.hpp"
#include "mzi/unitary.hpp"
#include "mzi/verify.hpp"

#endif  // MZI_MZI_HPP
