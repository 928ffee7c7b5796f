//
// Copyright 2026 The FGWS Authors
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
//

// Umbrella header.

#ifndef FGWS_FGWS_HPP_
#define FGWS_FGWS_HPP_

#include "fgws/attacks.hpp"
#include "fgws/classifier.hpp"
#include "fgws/corpus.hpp"
#include "fgws/detector.hpp"
#include "fgws/error.hpp"
#include "fgws/json_io.hpp"
#include "fgws/language_model.hpp"
#include "fgws/lexicon.hpp"
#include "fgws/pipeline.hpp"
#include "fgws/report.hpp"
#include "fgws/stats.hpp"
#include "fgws/util.hpp"

#endif  // FGWS_FGWS_HPP_
