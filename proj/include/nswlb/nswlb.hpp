#pragma once

#include <nswlb/bounds.hpp>
#include <nswlb/equilibria.hpp>
#include <nswlb/errors.hpp>
#include <nswlb/game.hpp>
#include <nswlb/generators.hpp>
#include <nswlb/latency.hpp>
#include <nswlb/nonatomic.hpp>
#include <nswlb/online_greedy.hpp>
#include <nswlb/optima.hpp>
#include <nswlb/random_instances.hpp>
