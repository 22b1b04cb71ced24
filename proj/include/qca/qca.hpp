#pragma once

#include "automaton.hpp"
#include "builtin.hpp"
#include "core.hpp"
#include "eca.hpp"
#include "finite_field.hpp"
#include "group.hpp"
#include "io.hpp"
#include "measure.hpp"
#include "quasigroup.hpp"
#include "rational.hpp"
#include "sample.hpp"
