#pragma once

#include "bethe/branching.hpp"
#include "bethe/certificates.hpp"
#include "bethe/error.hpp"
#include "bethe/io.hpp"
#include "bethe/measure.hpp"
#include "bethe/oracle.hpp"
#include "bethe/polyfam.hpp"
#include "bethe/polynomial.hpp"
#include "bethe/report.hpp"
#include "bethe/roots.hpp"
#include "bethe/spectra.hpp"
#include "bethe/treegen.hpp"
