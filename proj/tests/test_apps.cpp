// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>
