/* Exercises the C interface from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "steercert/steercert.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

int main(int argc, char** argv) {
  const char* tmp = argc > 1 ? argv[1] : "capi_test_tmp.json";
  sc_assemblage* a = NULL;
  sc_report* r = NULL;

  EXPECT(sc_assemblage_fixture("abb1", &a) == SC_OK);
  EXPECT(sc_assemblage_num_alices(a) == 1);
  EXPECT(sc_assemblage_num_bobs(a) == 2);

  EXPECT(sc_validate(a, &r) == SC_OK);
  EXPECT(sc_report_outcome(r) == SC_PASS);
  sc_report_free(r);

  EXPECT(sc_lambda(a, NULL, &r) == SC_OK);
  EXPECT(sc_report_outcome(r) == SC_NEGATIVE);
  EXPECT(fabs(sc_report_value(r) + 0.00185) < 0.0005);
  EXPECT(strstr(sc_report_json(r), "\"lambda_star\"") != NULL);
  EXPECT(sc_report_seconds(r) >= 0.0);
  sc_report_free(r);

  /* Save, reload and compare the serialised text. */
  char* first = NULL;
  char* second = NULL;
  EXPECT(sc_assemblage_save(a, tmp, 1) == SC_OK);
  sc_assemblage* b = NULL;
  EXPECT(sc_assemblage_load(tmp, &b) == SC_OK);
  EXPECT(sc_assemblage_to_json(a, 1, &first) == SC_OK);
  EXPECT(sc_assemblage_to_json(b, 1, &second) == SC_OK);
  EXPECT(first && second && strcmp(first, second) == 0);
  sc_string_free(first);
  sc_string_free(second);
  remove(tmp);

  sc_assemblage* noise = NULL;
  EXPECT(sc_assemblage_noise("w", a, &noise) == SC_OK);
  EXPECT(sc_robustness(a, noise, "w", NULL, &r) == SC_OK);
  EXPECT(fabs(sc_report_value(r) - 0.0139) < 0.002);
  EXPECT(sc_report_outcome(r) == SC_NEGATIVE);
  sc_report_free(r);
  sc_assemblage_free(noise);

  /* Config validation and error reporting. */
  sc_solver_config cfg = sc_default_config();
  EXPECT(cfg.eps_feas == 1e-8);
  cfg.max_iters = 0;
  r = (sc_report*)0x1;
  EXPECT(sc_lambda(a, &cfg, &r) == SC_ERR_INVALID_ARGUMENT);
  EXPECT(r == NULL);
  EXPECT(strlen(sc_last_error()) > 0);
  EXPECT(sc_hierarchy(a, 2, NULL, &r) == SC_ERR_UNSUPPORTED_LEVEL);
  EXPECT(sc_assemblage_fixture("nope", &b) == SC_ERR_INVALID_ARGUMENT);
  EXPECT(sc_assemblage_noise("pink", NULL, &b) == SC_ERR_INVALID_ARGUMENT);
  EXPECT(sc_assemblage_from_json("{\"format_version\": \"1\"", &b) == SC_ERR_PARSE);
  EXPECT(strstr(sc_last_error(), "line") != NULL);
  EXPECT(sc_assemblage_load("/nonexistent/dir/file.json", &b) == SC_ERR_IO);
  EXPECT(sc_validate(NULL, &r) == SC_ERR_INVALID_ARGUMENT);
  sc_assemblage_free(b);

  sc_assemblage* pr = NULL;
  EXPECT(sc_assemblage_fixture("pr", &pr) == SC_OK);
  EXPECT(sc_certify(pr, 1, NULL, &r) == SC_OK);
  EXPECT(sc_report_outcome(r) == SC_NEGATIVE);
  EXPECT(strstr(sc_report_summary(r), "Condition1_NPA") != NULL);
  sc_report_free(r);
  EXPECT(sc_lhs(pr, NULL, &r) == SC_OK);
  EXPECT(sc_report_outcome(r) == SC_NEGATIVE);
  sc_report_free(r);
  sc_assemblage_free(pr);

  sc_assemblage_free(a);
  sc_report_free(NULL);
  sc_assemblage_free(NULL);

  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("C API checks passed (%s)\n", sc_version());
  return failures ? 1 : 0;
}
