// Copyright 2026 The unitlang Authors.
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

#ifndef UNITLANG_UNITLANG_HPP
#define UNITLANG_UNITLANG_HPP

#include "unitlang/analysis.hpp"
#include "unitlang/bpe.hpp"
#include "unitlang/corpus.hpp"
#include "unitlang/error.hpp"
#include "unitlang/ngram.hpp"
#include "unitlang/parallel.hpp"
#include "unitlang/segmenter.hpp"
#include "unitlang/span.hpp"
#include "unitlang/vocab.hpp"

#endif  // UNITLANG_UNITLANG_HPP
