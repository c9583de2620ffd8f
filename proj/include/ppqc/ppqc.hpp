#pragma once

#include "ppqc/circuits.hpp"
#include "ppqc/entanglement.hpp"
#include "ppqc/errors.hpp"
#include "ppqc/estimation.hpp"
#include "ppqc/linalg.hpp"
#include "ppqc/numtheory.hpp"
#include "ppqc/oracle.hpp"
#include "ppqc/protocols.hpp"
#include "ppqc/rng.hpp"
#include "ppqc/states.hpp"
