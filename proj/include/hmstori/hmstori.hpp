#pragma once

#include "hmstori/exact.hpp"
#include "hmstori/rank.hpp"
#include "hmstori/torus.hpp"
#include "hmstori/bundle.hpp"
#include "hmstori/lagrangian.hpp"
#include "hmstori/io.hpp"
#include "hmstori/mirror.hpp"
