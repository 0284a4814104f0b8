// obboost.hpp
#pragma once

#include <obboost/adaboost_ol.hpp>
#include <obboost/bbm.hpp>
#include <obboost/booster.hpp>
#include <obboost/core.hpp>
#include <obboost/dataset.hpp>
#include <obboost/experiment.hpp>
#include <obboost/protocol.hpp>
#include <obboost/synthetic.hpp>
#include <obboost/weak_learners.hpp>
