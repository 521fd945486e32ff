#pragma once

#include "beta.hpp"
#include "lab.hpp"
#include "parser.hpp"
#include "print.hpp"
#include "random.hpp"
#include "resource.hpp"
#include "resource_reduction.hpp"
#include "selftest.hpp"
#include "syntax.hpp"
#include "taylor.hpp"
