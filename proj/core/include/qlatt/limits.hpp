#pragma once

namespace qlatt {

// Dense-path Hilbert space cap, 8192 unless the QLATT_MAX_DIM environment
// variable overrides it (read once; an override is reported on stderr).
long max_dense_dim();

void require_dense_dim(long dim, const char* what);

}  // namespace qlatt
