#pragma once

#include "pqg/audit.hpp"
#include "pqg/bipartition.hpp"
#include "pqg/certificate.hpp"
#include "pqg/certifier.hpp"
#include "pqg/clique_cover.hpp"
#include "pqg/errors.hpp"
#include "pqg/field.hpp"
#include "pqg/geometry.hpp"
#include "pqg/gq_certify.hpp"
#include "pqg/io.hpp"
#include "pqg/random.hpp"
#include "pqg/sparse_graph.hpp"
#include "pqg/spectral.hpp"
