#pragma once

#include "support/random_tree.hpp"

namespace testing_support {
using gardner::proptest::random_diffpoly;
}  // namespace testing_support
