#pragma once

// Umbrella header.

#include "gpzeta/rational.hpp"
#include "gpzeta/linform.hpp"
#include "gpzeta/poly.hpp"
#include "gpzeta/rootsys.hpp"
#include "gpzeta/symexpr.hpp"
#include "gpzeta/serialize.hpp"
#include "gpzeta/residue.hpp"
#include "gpzeta/xinum.hpp"
#include "gpzeta/residue_oracle.hpp"
#include "gpzeta/normalize.hpp"
#include "gpzeta/zerofind.hpp"
#include "gpzeta/pipeline.hpp"
