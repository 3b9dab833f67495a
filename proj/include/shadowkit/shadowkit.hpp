// Copyright 2026 The shadowkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Umbrella header.

#pragma once

#include "shadowkit/align.hpp"
#include "shadowkit/augment.hpp"
#include "shadowkit/color.hpp"
#include "shadowkit/edges.hpp"
#include "shadowkit/error.hpp"
#include "shadowkit/features.hpp"
#include "shadowkit/filter.hpp"
#include "shadowkit/geometry.hpp"
#include "shadowkit/hash.hpp"
#include "shadowkit/homography.hpp"
#include "shadowkit/image.hpp"
#include "shadowkit/io.hpp"
#include "shadowkit/losses.hpp"
#include "shadowkit/manifest.hpp"
#include "shadowkit/metrics.hpp"
#include "shadowkit/pipeline.hpp"
#include "shadowkit/sasma.hpp"
#include "shadowkit/server.hpp"
#include "shadowkit/warp.hpp"
