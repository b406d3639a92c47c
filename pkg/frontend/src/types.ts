// Mirrors of the assessment service's JSON shapes. The dashboard never
// computes evidence: every value rendered comes verbatim from these.

export type Status =
  | 'awaiting'
  | 'confirmed_problematic'
  | 'false_positive'
  | 'reported_to_publisher'
  | 'retracted';

export interface QueueEntry {
  paper_id: string;
  publisher: string;
  journal: string;
  status: Status;
  reports: Report[];
  assignee: string | null;
  history: number[];
  notes: string[];
  distinct_fingerprints: number;
}

export interface Report {
  kind: 'screening' | 'generated' | 'sequence';
  paper_id?: string;
  severity?: string;
  verdict?: string;
  distinct_fingerprints?: number;
  matches?: unknown[];
  [key: string]: unknown;
}

export interface QueueResponse {
  entries: QueueEntry[];
  total: number;
}

export interface Proposal {
  proposal_id: string;
  tortured: string;
  expected: string;
  proposer: string;
  evidence_paper_ids: string[];
  state: 'proposed' | 'promoted' | 'rejected';
}

export interface PublisherStats {
  publisher: string;
  by_status: Record<string, number>;
  total: number;
}

export interface QueueFilters {
  status?: Status;
  publisher?: string;
  minPhrases?: number;
}
