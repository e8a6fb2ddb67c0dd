#include "poolcheck/succinct.hpp"
