// Device capture: webcam hand landmarks through the MediaPipe Hands script
// (loaded from a CDN in index.html) and speech transcripts through the Web
// Speech API. Both are optional: when a device or API is missing or denied,
// the caller is told and the typed-transcript box becomes the input path, so
// the client stays fully usable in test mode.

export interface CaptureSink {
  sendTranscript(text: string): void;
  sendLandmarks(hand: "left" | "right", points: number[][]): void;
}

export interface CaptureStatus {
  camera: "on" | "off" | "denied" | "unavailable";
  microphone: "on" | "off" | "denied" | "unavailable";
}

type StatusCallback = (status: CaptureStatus) => void;

const status: CaptureStatus = { camera: "off", microphone: "off" };

declare const Hands: any; // provided by the MediaPipe script tag when present

export async function startCamera(
  sink: CaptureSink,
  video: HTMLVideoElement,
  onStatus: StatusCallback,
): Promise<void> {
  if (typeof Hands === "undefined" || !navigator.mediaDevices?.getUserMedia) {
    status.camera = "unavailable";
    onStatus(status);
    return;
  }
  let stream: MediaStream;
  try {
    stream = await navigator.mediaDevices.getUserMedia({ video: { width: 640, height: 480 } });
  } catch {
    status.camera = "denied";
    onStatus(status);
    return;
  }
  video.srcObject = stream;
  video.classList.add("live");
  await video.play();
  const hands = new Hands({
    locateFile: (file: string) => `https://cdn.jsdelivr.net/npm/@mediapipe/hands/${file}`,
  });
  hands.setOptions({ maxNumHands: 2, modelComplexity: 1, minDetectionConfidence: 0.6 });
  hands.onResults((results: any) => {
    const handsFound = results?.multiHandLandmarks ?? [];
    const labels = results?.multiHandedness ?? [];
    for (let i = 0; i < handsFound.length; i++) {
      const label = (labels[i]?.label ?? "Right").toLowerCase();
      const hand = label === "left" ? "left" : "right";
      const points = handsFound[i].map((p: any) => [p.x, p.y, p.z]);
      if (points.length === 21) {
        sink.sendLandmarks(hand, points);
      }
    }
  });
  status.camera = "on";
  onStatus(status);
  const pump = async () => {
    if (video.readyState >= 2) {
      try {
        await hands.send({ image: video });
      } catch {
        // dropped frame; keep pumping
      }
    }
    requestAnimationFrame(pump);
  };
  requestAnimationFrame(pump);
}

export function startMicrophone(sink: CaptureSink, onStatus: StatusCallback): void {
  const Recognition =
    (window as any).SpeechRecognition ?? (window as any).webkitSpeechRecognition;
  if (!Recognition) {
    status.microphone = "unavailable";
    onStatus(status);
    return;
  }
  const recognition = new Recognition();
  recognition.continuous = true;
  recognition.interimResults = false;
  recognition.onresult = (event: any) => {
    for (let i = event.resultIndex; i < event.results.length; i++) {
      if (event.results[i].isFinal) {
        const text = String(event.results[i][0].transcript).trim();
        if (text) sink.sendTranscript(text);
      }
    }
  };
  recognition.onerror = (event: any) => {
    status.microphone = event?.error === "not-allowed" ? "denied" : "unavailable";
    onStatus(status);
  };
  recognition.onend = () => {
    if (status.microphone === "on") recognition.start(); // keep listening
  };
  try {
    recognition.start();
    status.microphone = "on";
  } catch {
    status.microphone = "unavailable";
  }
  onStatus(status);
}
