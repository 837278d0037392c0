#pragma once

#include "affect/affect_kind.hpp"
#include "affect/classifier.hpp"
#include "affect/core.hpp"
#include "affect/engine.hpp"
#include "affect/narrative.hpp"
#include "affect/runner.hpp"
#include "affect/scenario.hpp"
#include "affect/trace_json.hpp"
