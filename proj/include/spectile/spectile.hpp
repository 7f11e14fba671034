#pragma once

#include <spectile/cyclotomic.hpp>
#include <spectile/diagonal.hpp>
#include <spectile/error.hpp>
#include <spectile/group.hpp>
#include <spectile/lifting.hpp>
#include <spectile/set_file.hpp>
#include <spectile/spectral.hpp>
#include <spectile/tiling.hpp>
