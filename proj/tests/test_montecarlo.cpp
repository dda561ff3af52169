#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "iftr/model.hpp"
TEST_CASE("placeholder_montecarlo") { CHECK(true); }
