// Umbrella header: pulls in the whole library.
#pragma once

#include "openspin/bethe.hpp"
#include "openspin/checks.hpp"
#include "openspin/gauge.hpp"
#include "openspin/kmatrix.hpp"
#include "openspin/linalg.hpp"
#include "openspin/poly.hpp"
#include "openspin/report.hpp"
#include "openspin/rmatrix.hpp"
#include "openspin/sov.hpp"
#include "openspin/spin.hpp"
#include "openspin/tq.hpp"
#include "openspin/transfer.hpp"
