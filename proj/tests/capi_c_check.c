/* Compiled as C: the public header must stay valid C. */
#include "varlex/varlex.h"

#include <math.h>
#include <stdio.h>

int main(void) {
  varlex_stepfn* f = NULL;
  varlex_stepfn* p = NULL;
  varlex_norm_result r;
  int ok = 1;
  if (varlex_indicator(0.0, 0.25, &f) != VARLEX_OK) return 1;
  if (varlex_generate("const:2", 8, 2, &p) != VARLEX_OK) return 1;
  if (varlex_luxemburg_norm(f, p, 1e-10, &r) != VARLEX_OK) return 1;
  ok = fabs(r.value - 0.5) <= 1e-9;
  if (varlex_stepfn_evaluate(f, 2.0, &r.value) != VARLEX_ERROR_DOMAIN) ok = 0;
  printf("norm %.12f, last error: %s\n", r.value, varlex_last_error());
  varlex_stepfn_destroy(p);
  varlex_stepfn_destroy(f);
  return ok ? 0 : 1;
}
