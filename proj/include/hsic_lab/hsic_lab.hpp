#pragma once

#include "hsic_lab/distribution.hpp"
#include "hsic_lab/errors.hpp"
#include "hsic_lab/hsic.hpp"
#include "hsic_lab/io.hpp"
#include "hsic_lab/kernel.hpp"
#include "hsic_lab/selector.hpp"
#include "hsic_lab/subset.hpp"
#include "hsic_lab/verifier.hpp"
