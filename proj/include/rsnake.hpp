/*
 * rsnake: resolution-adaptive deformable contours
 *
 * Copyright 2026 The rsnake Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "rsnake/config.hpp"
#include "rsnake/experiments.hpp"
#include "rsnake/geometry.hpp"
#include "rsnake/image.hpp"
#include "rsnake/metric.hpp"
#include "rsnake/pgm.hpp"
#include "rsnake/polygon.hpp"
#include "rsnake/quadtree.hpp"
#include "rsnake/scenes.hpp"
#include "rsnake/segment.hpp"
#include "rsnake/snake.hpp"
#include "rsnake/structure_tensor.hpp"
#include "rsnake/svg.hpp"
