#pragma once

#include "mttkit/dsl.hpp"
#include "mttkit/errors.hpp"
#include "mttkit/io_membership.hpp"
#include "mttkit/multi_return.hpp"
#include "mttkit/mtt.hpp"
#include "mttkit/oi_copying.hpp"
#include "mttkit/oracle.hpp"
#include "mttkit/sat.hpp"
#include "mttkit/tac.hpp"
#include "mttkit/trees.hpp"
