#pragma once

#include "typeprior/decision_tree.hpp"
#include "typeprior/evolution.hpp"
#include "typeprior/experiment.hpp"
#include "typeprior/game.hpp"
#include "typeprior/hba.hpp"
#include "typeprior/history.hpp"
#include "typeprior/lft.hpp"
#include "typeprior/metrics.hpp"
#include "typeprior/neural_net.hpp"
#include "typeprior/opponents.hpp"
#include "typeprior/policy.hpp"
#include "typeprior/priors.hpp"
#include "typeprior/report.hpp"
#include "typeprior/rng.hpp"
#include "typeprior/simplex.hpp"
#include "typeprior/stats.hpp"
#include "typeprior/type_pool.hpp"
