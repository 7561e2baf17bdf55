#pragma once

#include "gardner/proptest.hpp"

namespace testing_support {
using gardner::proptest::Node;
using gardner::proptest::TreeGen;
}  // namespace testing_support
