/* Copyright 2026 The acam Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.

 */
#include <stdio.h>

#include "acam/acam.h"

int main(void) {
  acam_geometry* geometry = NULL;
  acam_op_counts counts;
  if (acam_geometry_nominal(&geometry) != ACAM_OK) return 1;
  if (acam_geometry_pair_count(geometry) != 6) return 1;
  acam_geometry_destroy(geometry);
  if (acam_op_counts_compute(320, 240, 4, 512, 32, &counts) != ACAM_OK) return 1;
  printf("%llu %llu\n", (unsigned long long)counts.brute, (unsigned long long)counts.fast);
  return counts.brute == 118425600u && counts.fast == 2506944u ? 0 : 1;
}
