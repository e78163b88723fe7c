#pragma once

// Umbrella header: refactoring detection between two revisions of a Java
// source tree, with evaluation and threshold calibration on top.

#include "refdetect/tokens.hpp"
#include "refdetect/model.hpp"
#include "refdetect/parser.hpp"
#include "refdetect/similarity.hpp"
#include "refdetect/relationships.hpp"
#include "refdetect/engine.hpp"
#include "refdetect/repo_io.hpp"
#include "refdetect/eval.hpp"
#include "refdetect/report.hpp"
