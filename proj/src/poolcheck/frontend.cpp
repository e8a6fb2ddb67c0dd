#include "poolcheck/frontend.hpp"
