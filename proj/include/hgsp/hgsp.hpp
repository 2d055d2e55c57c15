#pragma once

#include "hgsp/apps.hpp"
#include "hgsp/errors.hpp"
#include "hgsp/filters.hpp"
#include "hgsp/hypergraph.hpp"
#include "hgsp/io.hpp"
#include "hgsp/sampling.hpp"
#include "hgsp/spectrum.hpp"
#include "hgsp/symtensor.hpp"
