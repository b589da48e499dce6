#pragma once

#include <string>

#include "flowkit/flow.hpp"

namespace fixtures {

// Weekly scheduled loop that looks up incident tasks and posts the inactive
// ones to a Teams channel. Exercises triggers with inputs, nested flowlogic
// (IF under FOREACH via block references) and an inputless component.
inline const std::string kWeeklyLoop = R"json({
  "type": "flow",
  "scope": "global",
  "trigger": {
    "annotation": "on wednesdays at a quarter to 5 pm",
    "type": "weekly",
    "inputs": [
      {
        "name": "day_of_week",
        "value": "3"
      },
      {
        "name": "time",
        "value": "1970-01-01 16:45:00"
      }
    ]
  },
  "components": [
    {
      "annotation": "look up incident tasks",
      "category": "action",
      "definition": "look_up_records",
      "scope": "global",
      "order": 1,
      "inputs": [
        {
          "name": "table",
          "value": "incident_task"
        }
      ]
    },
    {
      "annotation": "for all",
      "category": "flowlogic",
      "definition": "FOREACH",
      "scope": "global",
      "order": 2,
      "inputs": [
        {
          "name": "items",
          "value": "{{1.Records}}"
        }
      ]
    },
    {
      "annotation": "if the task is inactive",
      "category": "flowlogic",
      "definition": "IF",
      "scope": "global",
      "order": 3,
      "block": 2,
      "inputs": [
        {
          "name": "condition",
          "value": "{{2.item.active}}=false"
        }
      ]
    },
    {
      "annotation": "post incident details on MS Teams",
      "category": "action",
      "definition": "post_incident_details",
      "scope": "sn_ms_teams_ah",
      "order": 4,
      "block": 3
    }
  ]
})json";

inline flowkit::Flow weekly_loop_flow() {
  flowkit::ParseResult result = flowkit::parse_flow(kWeeklyLoop);
  return std::get<flowkit::Flow>(result);
}

}  // namespace fixtures
