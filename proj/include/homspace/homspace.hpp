#ifndef HOMSPACE_HOMSPACE_HPP
#define HOMSPACE_HOMSPACE_HPP

#include "homspace/linalg.hpp"
#include "homspace/structure_tensor.hpp"
#include "homspace/algebra.hpp"
#include "homspace/geometry.hpp"
#include "homspace/check.hpp"
#include "homspace/soliton.hpp"
#include "homspace/extension.hpp"
#include "homspace/document.hpp"
#include "homspace/corpus.hpp"
#include "homspace/report.hpp"

#endif  // HOMSPACE_HOMSPACE_HPP
