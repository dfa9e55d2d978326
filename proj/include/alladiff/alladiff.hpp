#pragma once

#include "asymptotics.hpp"
#include "bigint.hpp"
#include "cache.hpp"
#include "config.hpp"
#include "divisors.hpp"
#include "elliptic.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "polyring.hpp"
#include "rational.hpp"
