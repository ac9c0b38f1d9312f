#pragma once

#include "cadefect/ca.hpp"
#include "cadefect/defect.hpp"
#include "cadefect/error.hpp"
#include "cadefect/io.hpp"
#include "cadefect/spectral.hpp"
#include "cadefect/subshift.hpp"
#include "cadefect/symbolic.hpp"
#include "cadefect/tracker.hpp"
