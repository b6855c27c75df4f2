#pragma once

// Umbrella header.
#include "paneitz/core.hpp"
#include "paneitz/field_io.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/paneitz.hpp"
#include "paneitz/samples.hpp"
#include "paneitz/constructions/bubble.hpp"
#include "paneitz/constructions/connected_sum.hpp"
#include "paneitz/constructions/cutoff.hpp"
#include "paneitz/constructions/cylinder.hpp"
