// Pure projections of queue data. These mirror the service's own filter
// semantics so a locally filtered view is always verifiable against a
// direct API call with the same parameters.

import type { PublisherStats, QueueEntry, QueueFilters, Status } from './types';

// The service's state machine. The UI only offers decisions listed
// here, which is what makes illegal transitions unreachable from it.
export const TRANSITIONS: Record<Status, Status[]> = {
  awaiting: ['confirmed_problematic', 'false_positive'],
  confirmed_problematic: ['reported_to_publisher'],
  reported_to_publisher: ['retracted'],
  false_positive: [],
  retracted: [],
};

export function legalDecisions(status: Status): Status[] {
  return TRANSITIONS[status] ?? [];
}

export function isLegalTransition(from: Status, to: Status): boolean {
  return legalDecisions(from).includes(to);
}

export function applyFilters(entries: QueueEntry[], filters: QueueFilters): QueueEntry[] {
  return entries.filter((e) => {
    if (filters.status && e.status !== filters.status) return false;
    if (filters.publisher && e.publisher !== filters.publisher) return false;
    if (filters.minPhrases !== undefined && e.distinct_fingerprints < filters.minPhrases)
      return false;
    return true;
  });
}

// Default queue order: most distinct fingerprints first, paper id as a
// deterministic tiebreak.
export function sortEntries(entries: QueueEntry[]): QueueEntry[] {
  return [...entries].sort((a, b) => {
    if (b.distinct_fingerprints !== a.distinct_fingerprints) {
      return b.distinct_fingerprints - a.distinct_fingerprints;
    }
    return a.paper_id < b.paper_id ? -1 : a.paper_id > b.paper_id ? 1 : 0;
  });
}

// Per-publisher status breakdown, comparable field-for-field with the
// service's GET /stats/publishers response.
export function groupByPublisher(entries: QueueEntry[]): PublisherStats[] {
  const grouped = new Map<string, Record<string, number>>();
  for (const entry of entries) {
    const counts = grouped.get(entry.publisher) ?? {};
    counts[entry.status] = (counts[entry.status] ?? 0) + 1;
    grouped.set(entry.publisher, counts);
  }
  return [...grouped.entries()]
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([publisher, counts]) => {
      const by_status: Record<string, number> = {};
      for (const status of Object.keys(counts).sort()) by_status[status] = counts[status];
      return {
        publisher,
        by_status,
        total: Object.values(counts).reduce((s, n) => s + n, 0),
      };
    });
}
