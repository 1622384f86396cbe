/*
Copyright 2026 The lzrobust Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef LZROBUST_LZROBUST_HPP
#define LZROBUST_LZROBUST_HPP

#include "alpha.hpp"
#include "bits.hpp"
#include "block.hpp"
#include "coder.hpp"
#include "cutstack.hpp"
#include "deficiency.hpp"
#include "experiments.hpp"
#include "kt.hpp"
#include "lz78.hpp"
#include "lzwindow.hpp"
#include "measure.hpp"
#include "rational.hpp"
#include "seeds.hpp"
#include "sources.hpp"
#include "symbolic.hpp"
#include "theorem1.hpp"

#endif
