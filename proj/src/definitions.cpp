// Copyright (c) 2026 The ouvls Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ouvls/corpus.hpp"

namespace ouvls {

const CriterionDefinitions& builtin_definitions() {
  // Operational Guidelines for the Implementation of the World Heritage
  // Convention, paragraph 77.
  static const CriterionDefinitions defs = {
      {CriterionId(1), "To represent a masterpiece of human creative genius;"},
      {CriterionId(2),
       "To exhibit an important interchange of human values, over a span of "
       "time or within a cultural area of the world, on developments in "
       "architecture or technology, monumental arts, town-planning or "
       "landscape design;"},
      {CriterionId(3),
       "To bear a unique or at least exceptional testimony to a cultural "
       "tradition or to a civilization which is living or which has "
       "disappeared;"},
      {CriterionId(4),
       "To be an outstanding example of a type of building, architectural or "
       "technological ensemble or landscape which illustrates (a) significant "
       "stage(s) in human history;"},
      {CriterionId(5),
       "To be an outstanding example of a traditional human settlement, "
       "land-use, or sea-use which is representative of a culture (or "
       "cultures), or human interaction with the environment especially when "
       "it has become vulnerable under the impact of irreversible change;"},
      {CriterionId(6),
       "To be directly or tangibly associated with events or living "
       "traditions, with ideas, or with beliefs, with artistic and literary "
       "works of outstanding universal significance;"},
      {CriterionId(7),
       "To contain superlative natural phenomena or areas of exceptional "
       "natural beauty and aesthetic importance;"},
      {CriterionId(8),
       "To be outstanding examples representing major stages of earth's "
       "history, including the record of life, significant on-going "
       "geological processes in the development of landforms, or significant "
       "geomorphic or physiographic features;"},
      {CriterionId(9),
       "To be outstanding examples representing significant on-going "
       "ecological and biological processes in the evolution and development "
       "of terrestrial, fresh water, coastal and marine ecosystems and "
       "communities of plants and animals;"},
      {CriterionId(10),
       "To contain the most important and significant natural habitats for "
       "in-situ conservation of biological diversity, including those "
       "containing threatened species of outstanding universal value from the "
       "point of view of science or conservation."},
  };
  return defs;
}

}  // namespace ouvls
