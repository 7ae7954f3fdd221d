#ifndef OSEBA_OSEBA_HPP_
#define OSEBA_OSEBA_HPP_

#include "oseba/analysis.hpp"
#include "oseba/bench.hpp"
#include "oseba/csv.hpp"
#include "oseba/dataset.hpp"
#include "oseba/index_io.hpp"
#include "oseba/range_index.hpp"
#include "oseba/record.hpp"
#include "oseba/report_io.hpp"
#include "oseba/selection.hpp"

#endif  // OSEBA_OSEBA_HPP_
