// Wire formats of the hmiv session service and the widget overlay config.

export interface SessionState {
  mode: string;
  variables: Record<string, string>;
  display: string;
  enabled: string[];
}

export interface EventResult {
  accepted: boolean;
  fired: string | null;
  state: SessionState;
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface InputWidget {
  id: string;
  rect: Rect;
  event: string;
  label: string;
}

export interface DisplayWidget {
  id: string;
  rect: Rect;
  binding: string;          // variable name, "mode", or "display"
  format: "value" | "indicator" | "text";
  when?: string;            // indicator: lit when the bound value equals this
  label?: string;
}

export interface WidgetConfig {
  model: string;
  image: string;
  imageSize: { width: number; height: number };
  inputs: InputWidget[];
  displays: DisplayWidget[];
}
